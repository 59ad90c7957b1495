#pragma once

#include <cstdint>
#include <vector>

#include "lamc/dataset.hpp"
#include "lamc/losses.hpp"
#include "lamc/mlp.hpp"

namespace lamc {

struct TrainResult {
    MlpModel model;
    std::vector<double> epoch_loss; // mean instance loss per epoch
};

/// Mini-batch Adam training on a single-positive view. Shuffle order, batch
/// composition and every reduction order are fixed by `seed`, so identical
/// inputs give bit-identical parameters. The last partial batch is used.
/// BCE draws full label rows from the view's base dataset; AN/WAN use the
/// single positive index. Throws TrainingError (naming epoch and batch) if a
/// non-finite loss shows up, or if parameters are non-finite on exit.
TrainResult train(MlpModel model, const SinglePositiveView& view,
                  const LossKind& kind, AdamState adam, std::size_t epochs,
                  std::size_t batch_size, std::uint64_t seed);

} // namespace lamc
