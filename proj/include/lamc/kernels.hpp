#pragma once

#include "lamc/dataset.hpp"
#include "lamc/matrix.hpp"
#include "lamc/mlp.hpp"

namespace lamc::kernels {

// Batch kernels, OpenMP-parallel. Every parallel loop writes disjoint output
// elements and keeps each reduction inside one iteration in a fixed order,
// so results are bit-identical to the serial reference for any thread count.

/// hidden (B x h) and scores (B x K) for the rows of x (B x d).
void forward_batch(const MlpModel& m, const Matrix& x, Matrix& hidden,
                   Matrix& scores);

/// Mean-over-batch parameter gradients from dz2 = d(loss)/d(pre-sigmoid),
/// row per instance. `hidden` is the relu output saved by forward_batch.
void backward_batch(const MlpModel& m, const Matrix& x, const Matrix& hidden,
                    const Matrix& dz2, MlpGradients& g);

/// N x K score matrix over a whole dataset.
Matrix score_matrix(const MlpModel& m, const MultiLabelDataset& ds);

namespace serial {

// Straight-line reference implementations, kept for the kernel tests and the
// benchmark. Same arithmetic order as the parallel versions.

void forward_batch(const MlpModel& m, const Matrix& x, Matrix& hidden,
                   Matrix& scores);
void backward_batch(const MlpModel& m, const Matrix& x, const Matrix& hidden,
                    const Matrix& dz2, MlpGradients& g);
Matrix score_matrix(const MlpModel& m, const MultiLabelDataset& ds);

} // namespace serial

} // namespace lamc::kernels
