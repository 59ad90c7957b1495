#include "lamc/losses.hpp"

#include <algorithm>
#include <cmath>

#include "lamc/errors.hpp"

namespace lamc {

namespace {

inline double clamped(double f) {
    return std::clamp(f, kLogClamp, 1.0 - kLogClamp);
}

inline void check_positive(std::size_t k, int positive) {
    if (positive < 0 || static_cast<std::size_t>(positive) >= k)
        throw ShapeError("loss: positive index " + std::to_string(positive + 1) +
                         " out of range 1.." + std::to_string(k));
}

} // namespace

// The three losses share one term shape so that loss_wan(gamma=1), loss_an
// and loss_bce(one-hot) agree bit for bit, not just to tolerance.

double loss_bce(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size())
        throw ShapeError("loss_bce: scores/labels length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        sum += labels[i] ? std::log(clamped(scores[i]))
                         : std::log(1.0 - clamped(scores[i]));
    return -sum / static_cast<double>(scores.size());
}

double loss_an(std::span<const double> scores, int positive) {
    check_positive(scores.size(), positive);
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        sum += static_cast<int>(i) == positive
                   ? std::log(clamped(scores[i]))
                   : std::log(1.0 - clamped(scores[i]));
    return -sum / static_cast<double>(scores.size());
}

double loss_wan(std::span<const double> scores, int positive, double gamma) {
    check_positive(scores.size(), positive);
    if (!(gamma > 0.0)) throw ConfigError("loss_wan: gamma must be > 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        sum += static_cast<int>(i) == positive
                   ? std::log(clamped(scores[i]))
                   : gamma * std::log(1.0 - clamped(scores[i]));
    return -sum / static_cast<double>(scores.size());
}

double loss_value(const LossKind& kind, std::span<const double> scores,
                  std::span<const std::uint8_t> full_labels, int positive) {
    switch (kind.tag) {
        case LossTag::BCE: return loss_bce(scores, full_labels);
        case LossTag::AN: return loss_an(scores, positive);
        case LossTag::WAN: return loss_wan(scores, positive, kind.gamma);
    }
    throw ConfigError("loss_value: unknown loss tag");
}

void loss_grad_z(const LossKind& kind, std::span<const double> scores,
                 std::span<const std::uint8_t> full_labels, int positive,
                 std::span<double> dz) {
    const std::size_t k = scores.size();
    if (dz.size() != k) throw ShapeError("loss_grad_z: output length mismatch");
    if (kind.tag == LossTag::BCE) {
        if (full_labels.size() != k)
            throw ShapeError("loss_grad_z: scores/labels length mismatch");
    } else {
        check_positive(k, positive);
        if (kind.tag == LossTag::WAN && !(kind.gamma > 0.0))
            throw ConfigError("loss_grad_z: gamma must be > 0");
    }

    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double f = scores[i];
        if (f <= kLogClamp || f >= 1.0 - kLogClamp) {
            dz[i] = 0.0; // clamp active: the loss does not move with z here
            continue;
        }
        const bool pos = kind.tag == LossTag::BCE ? full_labels[i] != 0
                                                  : static_cast<int>(i) == positive;
        if (pos) {
            dz[i] = (f - 1.0) * inv_k;
        } else {
            const double w = kind.tag == LossTag::WAN ? kind.gamma : 1.0;
            dz[i] = w * f * inv_k;
        }
    }
}

} // namespace lamc
