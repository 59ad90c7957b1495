#include "lamc/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lamc/errors.hpp"
#include "lamc/kernels.hpp"
#include "lamc/rng.hpp"

namespace lamc {

ThresholdVector ThresholdVector::accept_all_for(std::size_t num_classes,
                                                double alpha) {
    ThresholdVector t;
    t.q.assign(num_classes, 0.0);
    t.accept_all.assign(num_classes, 1);
    t.alpha = alpha;
    t.per_class_n.assign(num_classes, 0);
    t.per_class_k.assign(num_classes, 0);
    return t;
}

ScoreSets collect_scores(const Matrix& scores, const MultiLabelDataset& cal,
                         std::optional<std::size_t> per_label_cap,
                         std::uint64_t seed) {
    if (scores.rows != cal.size() || scores.cols != cal.num_labels)
        throw ShapeError("collect_scores: score matrix does not match dataset");
    if (per_label_cap && *per_label_cap < 1)
        throw ConfigError("collect_scores: per_label_cap must be >= 1");

    const std::size_t k = cal.num_labels;
    ScoreSets out;
    out.per_class.resize(k);
    out.total_positives.assign(k, 0);

    std::vector<std::vector<std::size_t>> positives(k);
    for (std::size_t n = 0; n < cal.size(); ++n)
        for (std::size_t i = 0; i < k; ++i)
            if (cal.label(n, i)) positives[i].push_back(n);

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        auto& rows = positives[i];
        out.total_positives[i] = rows.size();
        if (per_label_cap && rows.size() > *per_label_cap) {
            // partial Fisher-Yates: the first cap entries are a uniform sample
            for (std::size_t j = 0; j < *per_label_cap; ++j) {
                std::uniform_int_distribution<std::size_t> pick(j, rows.size() - 1);
                std::swap(rows[j], rows[pick(rng)]);
            }
            rows.resize(*per_label_cap);
        }
        auto& pool = out.per_class[i];
        pool.reserve(rows.size());
        for (std::size_t n : rows) pool.push_back(scores.at(n, i));
    }
    return out;
}

ScoreSets collect_scores(const MlpModel& model, const MultiLabelDataset& cal,
                         std::optional<std::size_t> per_label_cap,
                         std::uint64_t seed) {
    return collect_scores(kernels::score_matrix(model, cal), cal, per_label_cap,
                          seed);
}

std::size_t quantile_order_index(std::size_t n, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ConfigError("quantile: alpha must lie in (0,1)");
    if (n == 0) throw ConfigError("quantile: empty pool has no order index");
    const double level = (1.0 - alpha) * static_cast<double>(n + 1);
    auto k = static_cast<long long>(std::ceil(level));
    k = std::clamp(k, 1LL, static_cast<long long>(n));
    return static_cast<std::size_t>(k);
}

std::optional<double> quantile_threshold(std::vector<double> pool, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ConfigError("quantile: alpha must lie in (0,1)");
    if (pool.empty()) return std::nullopt; // ACCEPT_ALL
    const std::size_t k = quantile_order_index(pool.size(), alpha);
    auto kth = pool.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(pool.begin(), kth, pool.end());
    return *kth;
}

ThresholdVector calibrate(const Matrix& scores, const MultiLabelDataset& cal,
                          double alpha, std::optional<std::size_t> per_label_cap,
                          std::uint64_t seed) {
    const ScoreSets sets = collect_scores(scores, cal, per_label_cap, seed);
    const std::size_t k = sets.num_classes();
    ThresholdVector t;
    t.alpha = alpha;
    t.q.assign(k, 0.0);
    t.accept_all.assign(k, 0);
    t.per_class_n.assign(k, 0);
    t.per_class_k.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& pool = sets.per_class[i];
        t.per_class_n[i] = pool.size();
        const auto q = quantile_threshold(pool, alpha);
        if (q) {
            t.q[i] = *q;
            t.per_class_k[i] = quantile_order_index(pool.size(), alpha);
        } else {
            t.accept_all[i] = 1;
        }
    }
    return t;
}

ThresholdVector calibrate(const MlpModel& model, const MultiLabelDataset& cal,
                          double alpha, std::optional<std::size_t> per_label_cap,
                          std::uint64_t seed) {
    return calibrate(kernels::score_matrix(model, cal), cal, alpha, per_label_cap,
                     seed);
}

FilteredPrediction filter(const ThresholdVector& thresholds,
                          std::span<const double> scores) {
    if (scores.size() != thresholds.num_classes())
        throw ShapeError("filter: scores length " + std::to_string(scores.size()) +
                         " != threshold classes " +
                         std::to_string(thresholds.num_classes()));
    FilteredPrediction fp;
    fp.scores.assign(scores.begin(), scores.end());
    fp.accepted.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        fp.accepted[i] =
            thresholds.accept_all[i] || scores[i] > thresholds.q[i] ? 1 : 0;
    return fp;
}

std::vector<double> masked_scores(const FilteredPrediction& fp) {
    std::vector<double> out(fp.scores.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = fp.accepted[i] ? fp.scores[i] : 0.0;
    return out;
}

Matrix masked_score_matrix(const ThresholdVector& thresholds,
                           const Matrix& scores) {
    if (scores.cols != thresholds.num_classes())
        throw ShapeError("masked_score_matrix: width mismatch");
    Matrix out(scores.rows, scores.cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(scores.rows); ++n) {
        const auto row = scores.row(static_cast<std::size_t>(n));
        auto dst = out.row(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < scores.cols; ++i) {
            const bool keep =
                thresholds.accept_all[i] || row[i] > thresholds.q[i];
            dst[i] = keep ? row[i] : 0.0;
        }
    }
    return out;
}

std::string threshold_report(const ThresholdVector& t,
                             const std::vector<std::string>& label_names) {
    std::ostringstream out;
    out << "class\tn_cal\tk\tq\n";
    for (std::size_t i = 0; i < t.num_classes(); ++i) {
        if (i < label_names.size())
            out << label_names[i];
        else
            out << "class_" << (i + 1); // 1-based in reports
        out << '\t' << t.per_class_n[i] << '\t' << t.per_class_k[i] << '\t';
        if (t.accept_all[i]) {
            out << "ACCEPT_ALL";
        } else {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), t.q[i]);
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace lamc
