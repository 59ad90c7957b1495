#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lamc/matrix.hpp"

namespace lamc {

/// Dense multi-label dataset: N x d feature matrix plus N x K binary label
/// matrix. Immutable after construction; validate() enforces the invariants
/// (labels in {0,1}, finite features, N >= 1, d >= 1, K >= 2).
struct MultiLabelDataset {
    Matrix features;                        // N x d
    std::vector<std::uint8_t> labels;       // N x K, row-major
    std::size_t num_labels = 0;             // K
    std::vector<std::string> feature_names; // empty or size d
    std::vector<std::string> label_names;   // empty or size K

    std::size_t size() const { return features.rows; }
    std::size_t num_features() const { return features.cols; }

    std::uint8_t label(std::size_t n, std::size_t i) const {
        return labels[n * num_labels + i];
    }
    std::span<const std::uint8_t> label_row(std::size_t n) const {
        return {labels.data() + n * num_labels, num_labels};
    }
    std::span<const double> instance(std::size_t n) const { return features.row(n); }

    std::size_t count_positives(std::size_t n) const;

    void validate() const; // throws ValidationError
};

/// Fractions of a deterministic train/calibration/validation/test partition.
/// cal_frac may be 0 (plain train/val/test protocol).
struct SplitSpec {
    double train_frac = 0.7;
    double cal_frac = 0.1;
    double val_frac = 0.1;
    double test_frac = 0.1;
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

struct Splits {
    MultiLabelDataset train;
    MultiLabelDataset cal;
    MultiLabelDataset val;
    MultiLabelDataset test;
};

/// Training view exposing exactly one true-positive label index per kept
/// instance. Indices are 0-based in memory; logs and reports print them
/// 1-based. Rows with no positive label are dropped and counted.
struct SinglePositiveView {
    const MultiLabelDataset* base = nullptr;
    std::vector<std::size_t> rows;    // indices into *base
    std::vector<int> positive_index;  // 0-based chosen positive per kept row
    std::size_t dropped = 0;          // zero-positive instances removed

    std::size_t size() const { return rows.size(); }
    std::span<const double> instance(std::size_t i) const {
        return base->instance(rows[i]);
    }
    std::span<const std::uint8_t> label_row(std::size_t i) const {
        return base->label_row(rows[i]);
    }
};

// Dense CSV: header line "#labels=K", then rows of d feature reals followed
// by K label bits. UTF-8, '\n' line endings, '.' decimal separator.
MultiLabelDataset load_dataset(const std::string& path);
void save_dataset(const MultiLabelDataset& ds, const std::string& path);

// Disjoint, exhaustive, seeded partition. Non-train part sizes are
// floor(frac * N); the remainder goes to train.
Splits split(const MultiLabelDataset& ds, const SplitSpec& spec);

// For each instance with >= 1 positive, picks one positive uniformly at
// random (seeded). Zero-positive instances are dropped and counted.
SinglePositiveView project_single_positive(const MultiLabelDataset& ds,
                                           std::uint64_t seed);

// Class-conditional Gaussian prototype mixture. Each instance draws one
// primary class plus independent extra positives so that the expected label
// cardinality equals `cardinality`; its features are the sum of the positive
// prototypes plus isotropic noise. With probability `noise` the features are
// resampled around a random prototype of a class the instance does not have.
MultiLabelDataset generate_synthetic(std::size_t n, std::size_t d, std::size_t k,
                                     double cardinality, double noise,
                                     std::uint64_t seed);

} // namespace lamc
