#pragma once

#include <cstdint>
#include <span>

namespace lamc {

enum class LossTag { BCE, AN, WAN };

/// Loss selector. `gamma` is only read for WAN; `default_gamma(K)` gives the
/// 1/(K-1) weight that balances the single positive against the assumed
/// negatives.
struct LossKind {
    LossTag tag = LossTag::WAN;
    double gamma = 1.0;

    static LossKind bce() { return {LossTag::BCE, 1.0}; }
    static LossKind an() { return {LossTag::AN, 1.0}; }
    static LossKind wan(double g) { return {LossTag::WAN, g}; }
    static double default_gamma(std::size_t num_labels) {
        return 1.0 / static_cast<double>(num_labels - 1);
    }
};

// Scores are clamped to [kLogClamp, 1 - kLogClamp] before any log, so every
// loss is finite for scores in the closed interval [0, 1].
inline constexpr double kLogClamp = 1e-7;

// Mean binary cross entropy over the K labels of one instance.
double loss_bce(std::span<const double> scores, std::span<const std::uint8_t> labels);

// BCE against the one-hot vector at `positive` (0-based): the "assume
// negative" treatment of a single observed positive.
double loss_an(std::span<const double> scores, int positive);

// AN with the negative terms weighted by gamma; gamma == 1 reduces exactly
// to loss_an.
double loss_wan(std::span<const double> scores, int positive, double gamma);

double loss_value(const LossKind& kind, std::span<const double> scores,
                  std::span<const std::uint8_t> full_labels, int positive);

// d(loss)/dz for z the pre-sigmoid activations, given scores = sigmoid(z).
// Zero where the log clamp is active (the clamped loss is flat there).
void loss_grad_z(const LossKind& kind, std::span<const double> scores,
                 std::span<const std::uint8_t> full_labels, int positive,
                 std::span<double> dz);

} // namespace lamc
