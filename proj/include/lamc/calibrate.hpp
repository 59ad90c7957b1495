#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lamc/dataset.hpp"
#include "lamc/matrix.hpp"
#include "lamc/mlp.hpp"

namespace lamc {

/// Per-class positive-score pools collected from a calibration split.
struct ScoreSets {
    std::vector<std::vector<double>> per_class; // S_i, one pool per class
    std::vector<std::size_t> total_positives;   // before any cap

    std::size_t num_classes() const { return per_class.size(); }
};

/// Per-class calibrated thresholds. A class whose calibration pool was empty
/// carries the ACCEPT_ALL sentinel and never rejects.
struct ThresholdVector {
    std::vector<double> q;                 // threshold, valid when !accept_all[i]
    std::vector<std::uint8_t> accept_all;  // sentinel flags
    double alpha = 0.5;
    std::vector<std::size_t> per_class_n;  // |S_i| actually used
    std::vector<std::size_t> per_class_k;  // order index, 1-based; 0 if accept-all

    std::size_t num_classes() const { return q.size(); }

    /// All-accepting thresholds; filtering with these is the identity.
    static ThresholdVector accept_all_for(std::size_t num_classes, double alpha);
};

struct FilteredPrediction {
    std::vector<double> scores;           // as produced by the model
    std::vector<std::uint8_t> accepted;   // scores[i] > q_i (or accept-all)
};

// Calibration consumes only a score matrix and labels; anything that can
// score instances (an MlpModel, a stub, another model family) plugs in by
// producing the matrix.

/// S_i = { scores[j][i] : labels[j][i] = 1 }, optionally capped to a seeded
/// uniform sample of `per_label_cap` positives per class.
ScoreSets collect_scores(const Matrix& scores, const MultiLabelDataset& cal,
                         std::optional<std::size_t> per_label_cap,
                         std::uint64_t seed);
ScoreSets collect_scores(const MlpModel& model, const MultiLabelDataset& cal,
                         std::optional<std::size_t> per_label_cap,
                         std::uint64_t seed);

/// Order index k = ceil((1 - alpha) * (n + 1)) clamped to [1, n].
std::size_t quantile_order_index(std::size_t n, double alpha);

/// k-th smallest element of `pool` at the order index above; nullopt
/// (ACCEPT_ALL) when the pool is empty. Ties are kept as duplicates.
std::optional<double> quantile_threshold(std::vector<double> pool, double alpha);

ThresholdVector calibrate(const Matrix& scores, const MultiLabelDataset& cal,
                          double alpha, std::optional<std::size_t> per_label_cap,
                          std::uint64_t seed);
ThresholdVector calibrate(const MlpModel& model, const MultiLabelDataset& cal,
                          double alpha, std::optional<std::size_t> per_label_cap,
                          std::uint64_t seed);

/// accepted[i] = scores[i] > q_i, strict. ACCEPT_ALL classes always accept.
FilteredPrediction filter(const ThresholdVector& thresholds,
                          std::span<const double> scores);

/// Rejected entries replaced by 0.0 so ranking metrics see a full vector.
std::vector<double> masked_scores(const FilteredPrediction& fp);

/// Apply filter + masking to every row of a score matrix.
Matrix masked_score_matrix(const ThresholdVector& thresholds, const Matrix& scores);

/// One record per class: label name, n_cal, k, and q or "ACCEPT_ALL".
std::string threshold_report(const ThresholdVector& t,
                             const std::vector<std::string>& label_names);

} // namespace lamc
