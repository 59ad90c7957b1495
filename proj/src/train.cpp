#include "lamc/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lamc/errors.hpp"
#include "lamc/kernels.hpp"
#include "lamc/rng.hpp"

namespace lamc {

TrainResult train(MlpModel model, const SinglePositiveView& view,
                  const LossKind& kind, AdamState adam, std::size_t epochs,
                  std::size_t batch_size, std::uint64_t seed) {
    if (view.size() == 0) throw ValidationError("train: empty view");
    if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");

    const std::size_t count = view.size();
    const std::size_t d = model.input_dim();
    const std::size_t k = model.output_dim();
    if (view.base->num_features() != d || view.base->num_labels != k)
        throw ShapeError("train: view dimensions do not match model");
    // validate up front; the batch loop below must not throw from inside the
    // parallel region
    if (kind.tag == LossTag::WAN && !(kind.gamma > 0.0))
        throw ConfigError("train: WAN gamma must be > 0");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});

    Matrix xb, hidden, scores, dz2;
    MlpGradients grads = MlpGradients::zeros_like(model);
    std::vector<double> batch_losses;

    TrainResult result;
    result.epoch_loss.reserve(epochs);

    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        shuffle_indices(std::span<std::size_t>(order), rng);
        double epoch_sum = 0.0;

        for (std::size_t start = 0, batch_no = 0; start < count;
             start += batch_size, ++batch_no) {
            const std::size_t b = std::min(batch_size, count - start);
            if (xb.rows != b) xb = Matrix(b, d);
            if (dz2.rows != b) dz2 = Matrix(b, k);
            batch_losses.assign(b, 0.0);

            for (std::size_t r = 0; r < b; ++r) {
                const auto x = view.instance(order[start + r]);
                std::copy(x.begin(), x.end(), xb.row(r).begin());
            }

            kernels::forward_batch(model, xb, hidden, scores);

#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(b); ++r) {
                const std::size_t idx = order[start + static_cast<std::size_t>(r)];
                const auto row_scores = scores.row(static_cast<std::size_t>(r));
                const auto labels = view.label_row(idx);
                const int positive = view.positive_index[idx];
                batch_losses[static_cast<std::size_t>(r)] =
                    loss_value(kind, row_scores, labels, positive);
                loss_grad_z(kind, row_scores, labels, positive,
                            dz2.row(static_cast<std::size_t>(r)));
            }

            const double batch_sum = pairwise_sum(batch_losses);
            if (!std::isfinite(batch_sum))
                throw TrainingError("train: non-finite loss at epoch " +
                                    std::to_string(epoch + 1) + ", batch " +
                                    std::to_string(batch_no + 1));
            epoch_sum += batch_sum;

            kernels::backward_batch(model, xb, hidden, dz2, grads);
            adam.update(model, grads);
        }

        result.epoch_loss.push_back(epoch_sum / static_cast<double>(count));
    }

    if (!model.finite())
        throw TrainingError("train: non-finite parameters after epoch " +
                            std::to_string(epochs));
    result.model = std::move(model);
    return result;
}

} // namespace lamc
