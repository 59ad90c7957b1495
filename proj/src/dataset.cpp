#include "lamc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "lamc/errors.hpp"
#include "lamc/rng.hpp"

namespace lamc {

std::size_t MultiLabelDataset::count_positives(std::size_t n) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < num_labels; ++i) c += label(n, i);
    return c;
}

void MultiLabelDataset::validate() const {
    if (size() < 1) throw ValidationError("dataset: N must be >= 1");
    if (num_features() < 1) throw ValidationError("dataset: d must be >= 1");
    if (num_labels < 2) throw ValidationError("dataset: K must be >= 2");
    if (labels.size() != size() * num_labels)
        throw ValidationError("dataset: label matrix shape mismatch");
    for (std::size_t n = 0; n < size(); ++n) {
        for (std::size_t j = 0; j < num_features(); ++j) {
            if (!std::isfinite(features.at(n, j)))
                throw ValidationError("dataset: non-finite feature at row " +
                                      std::to_string(n + 1) + ", column " +
                                      std::to_string(j + 1));
        }
        for (std::size_t i = 0; i < num_labels; ++i) {
            const std::uint8_t v = label(n, i);
            if (v != 0 && v != 1)
                throw ValidationError("dataset: label not in {0,1} at row " +
                                      std::to_string(n + 1) + ", label " +
                                      std::to_string(i + 1));
        }
    }
    if (!feature_names.empty() && feature_names.size() != num_features())
        throw ValidationError("dataset: feature_names size mismatch");
    if (!label_names.empty() && label_names.size() != num_labels)
        throw ValidationError("dataset: label_names size mismatch");
}

void SplitSpec::validate() const {
    const double fr[4] = {train_frac, cal_frac, val_frac, test_frac};
    double sum = 0.0;
    for (double f : fr) {
        if (!(f >= 0.0)) throw ConfigError("split: fractions must be nonnegative");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split: fractions must sum to 1 (got " +
                          std::to_string(sum) + ")");
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view field, std::size_t line_no, std::size_t col) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' ||
                             *(last - 1) == '\r'))
        --last;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ", column " +
                         std::to_string(col) + ": cannot parse '" +
                         std::string(field) + "' as a number");
    return v;
}

MultiLabelDataset take_rows(const MultiLabelDataset& ds,
                            std::span<const std::size_t> rows) {
    MultiLabelDataset out;
    out.features = Matrix(rows.size(), ds.num_features());
    out.labels.resize(rows.size() * ds.num_labels);
    out.num_labels = ds.num_labels;
    out.feature_names = ds.feature_names;
    out.label_names = ds.label_names;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = ds.instance(rows[i]);
        std::copy(src.begin(), src.end(), out.features.row(i).begin());
        const auto lab = ds.label_row(rows[i]);
        std::copy(lab.begin(), lab.end(),
                  out.labels.begin() + static_cast<std::ptrdiff_t>(i * ds.num_labels));
    }
    return out;
}

} // namespace

MultiLabelDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    constexpr std::string_view kHeader = "#labels=";
    if (line.rfind(kHeader, 0) != 0)
        throw ParseError(path + ": line 1: expected header '#labels=K'");
    std::size_t num_labels = 0;
    {
        const std::string_view rest = std::string_view(line).substr(kHeader.size());
        const auto res =
            std::from_chars(rest.data(), rest.data() + rest.size(), num_labels);
        if (res.ec != std::errc() || res.ptr != rest.data() + rest.size())
            throw ParseError(path + ": line 1: malformed label count '" +
                             std::string(rest) + "'");
    }

    MultiLabelDataset ds;
    ds.num_labels = num_labels;
    std::vector<double> feat;
    std::size_t num_features = 0;
    std::size_t line_no = 1;
    std::size_t n = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (n == 0) {
            if (fields.size() <= num_labels)
                throw ParseError(path + ": line " + std::to_string(line_no) +
                                 ": row has " + std::to_string(fields.size()) +
                                 " fields, need more than " +
                                 std::to_string(num_labels) + " label columns");
            num_features = fields.size() - num_labels;
        } else if (fields.size() != num_features + num_labels) {
            throw ParseError(path + ": line " + std::to_string(line_no) +
                             ": expected " + std::to_string(num_features + num_labels) +
                             " fields, got " + std::to_string(fields.size()));
        }

        for (std::size_t j = 0; j < num_features; ++j) {
            const double v = parse_double(fields[j], line_no, j + 1);
            if (!std::isfinite(v))
                throw ValidationError(path + ": line " + std::to_string(line_no) +
                                      ", column " + std::to_string(j + 1) +
                                      ": non-finite feature value");
            feat.push_back(v);
        }
        for (std::size_t i = 0; i < num_labels; ++i) {
            const std::size_t col = num_features + i + 1;
            const double v = parse_double(fields[num_features + i], line_no, col);
            if (v != 0.0 && v != 1.0)
                throw ValidationError(path + ": line " + std::to_string(line_no) +
                                      ", column " + std::to_string(col) +
                                      ": label value must be 0 or 1");
            ds.labels.push_back(static_cast<std::uint8_t>(v));
        }
        ++n;
    }

    if (n == 0) throw ParseError(path + ": no data rows");

    ds.features.rows = n;
    ds.features.cols = num_features;
    ds.features.data = std::move(feat);
    ds.validate();
    return ds;
}

void save_dataset(const MultiLabelDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset file: " + path);
    out << "#labels=" << ds.num_labels << "\n";
    char buf[64];
    for (std::size_t n = 0; n < ds.size(); ++n) {
        for (std::size_t j = 0; j < ds.num_features(); ++j) {
            // shortest round-trip representation keeps load(save(ds)) exact
            const auto res =
                std::to_chars(buf, buf + sizeof(buf), ds.features.at(n, j));
            out.write(buf, res.ptr - buf);
            out.put(',');
        }
        for (std::size_t i = 0; i < ds.num_labels; ++i) {
            out.put(static_cast<char>('0' + ds.label(n, i)));
            out.put(i + 1 < ds.num_labels ? ',' : '\n');
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

Splits split(const MultiLabelDataset& ds, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = ds.size();
    const auto part = [&](double frac) {
        return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n)));
    };
    const std::size_t n_cal = part(spec.cal_frac);
    const std::size_t n_val = part(spec.val_frac);
    const std::size_t n_test = part(spec.test_frac);
    if (n_cal + n_val + n_test > n)
        throw ConfigError("split: dataset too small for requested fractions");
    const std::size_t n_train = n - n_cal - n_val - n_test;

    const auto check = [](double frac, std::size_t count, const char* name) {
        if (frac > 0.0 && count == 0)
            throw ConfigError(std::string("split: ") + name +
                              " fraction is nonzero but yields 0 instances");
    };
    check(spec.train_frac, n_train, "train");
    check(spec.cal_frac, n_cal, "cal");
    check(spec.val_frac, n_val, "val");
    check(spec.test_frac, n_test, "test");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(spec.seed);
    shuffle_indices(std::span<std::size_t>(order), rng);

    const std::size_t* p = order.data();
    Splits out;
    out.train = take_rows(ds, {p, n_train});
    out.cal = take_rows(ds, {p + n_train, n_cal});
    out.val = take_rows(ds, {p + n_train + n_cal, n_val});
    out.test = take_rows(ds, {p + n_train + n_cal + n_val, n_test});
    return out;
}

SinglePositiveView project_single_positive(const MultiLabelDataset& ds,
                                           std::uint64_t seed) {
    SinglePositiveView view;
    view.base = &ds;
    std::mt19937_64 rng(seed);
    std::vector<int> positives;
    for (std::size_t n = 0; n < ds.size(); ++n) {
        positives.clear();
        for (std::size_t i = 0; i < ds.num_labels; ++i)
            if (ds.label(n, i)) positives.push_back(static_cast<int>(i));
        if (positives.empty()) {
            ++view.dropped;
            continue;
        }
        int chosen = positives[0];
        if (positives.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, positives.size() - 1);
            chosen = positives[pick(rng)];
        }
        view.rows.push_back(n);
        view.positive_index.push_back(chosen);
    }
    if (view.rows.empty())
        throw ValidationError(
            "project_single_positive: every instance has zero positive labels");
    return view;
}

MultiLabelDataset generate_synthetic(std::size_t n, std::size_t d, std::size_t k,
                                     double cardinality, double noise,
                                     std::uint64_t seed) {
    if (n < 1 || d < 1 || k < 2)
        throw ConfigError("generate_synthetic: need n >= 1, d >= 1, k >= 2");
    if (cardinality < 1.0 || cardinality > static_cast<double>(k))
        throw ConfigError("generate_synthetic: cardinality must be in [1, k]");
    if (noise < 0.0 || noise >= 1.0)
        throw ConfigError("generate_synthetic: noise must be in [0, 1)");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_class(0, k - 1);

    Matrix prototypes(k, d);
    for (double& v : prototypes.data) v = gauss(rng);

    constexpr double kFeatureNoise = 0.3;
    const double p_extra =
        (cardinality - 1.0) / static_cast<double>(k - 1); // E|Y| = cardinality

    MultiLabelDataset ds;
    ds.features = Matrix(n, d);
    ds.labels.assign(n * k, 0);
    ds.num_labels = k;

    std::vector<std::size_t> absent;
    for (std::size_t row = 0; row < n; ++row) {
        std::uint8_t* lab = ds.labels.data() + row * k;
        lab[pick_class(rng)] = 1;
        for (std::size_t i = 0; i < k; ++i)
            if (!lab[i] && unit(rng) < p_extra) lab[i] = 1;

        auto x = ds.features.row(row);
        if (noise > 0.0 && unit(rng) < noise) {
            // corrupt: features come from a prototype the labels do not claim
            absent.clear();
            for (std::size_t i = 0; i < k; ++i)
                if (!lab[i]) absent.push_back(i);
            const std::size_t other =
                absent.empty()
                    ? pick_class(rng)
                    : absent[std::uniform_int_distribution<std::size_t>(
                          0, absent.size() - 1)(rng)];
            for (std::size_t j = 0; j < d; ++j)
                x[j] = prototypes.at(other, j) + kFeatureNoise * gauss(rng);
        } else {
            for (std::size_t j = 0; j < d; ++j) {
                double v = 0.0;
                for (std::size_t i = 0; i < k; ++i)
                    if (lab[i]) v += prototypes.at(i, j);
                x[j] = v + kFeatureNoise * gauss(rng);
            }
        }
    }
    ds.validate();
    return ds;
}

} // namespace lamc
