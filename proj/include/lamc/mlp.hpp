#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lamc/matrix.hpp"

namespace lamc {

/// Two-layer perceptron: scores = sigmoid(W2 * relu(W1 * x + b1) + b2).
struct MlpModel {
    Matrix w1;               // h x d
    std::vector<double> b1;  // h
    Matrix w2;               // K x h
    std::vector<double> b2;  // K

    std::size_t input_dim() const { return w1.cols; }
    std::size_t hidden_dim() const { return w1.rows; }
    std::size_t output_dim() const { return w2.rows; }

    /// Glorot-uniform weights, zero biases, seeded.
    static MlpModel init(std::size_t input_dim, std::size_t hidden_dim,
                         std::size_t output_dim, std::uint64_t seed);

    /// Single-instance forward pass; every score lies in (0,1).
    std::vector<double> forward(std::span<const double> x) const;

    bool finite() const;
    bool same_shape(const MlpModel& o) const;
};

/// Parameter-shaped gradient accumulator.
struct MlpGradients {
    Matrix w1;
    std::vector<double> b1;
    Matrix w2;
    std::vector<double> b2;

    static MlpGradients zeros_like(const MlpModel& m);
};

/// Adam with bias correction; beta1/beta2/eps are the canonical defaults.
struct AdamState {
    Matrix m_w1, v_w1;
    std::vector<double> m_b1, v_b1;
    Matrix m_w2, v_w2;
    std::vector<double> m_b2, v_b2;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double learning_rate = 1e-3;

    static AdamState init(const MlpModel& m, double learning_rate);
    void update(MlpModel& model, const MlpGradients& g);
};

double sigmoid(double z);

// Text checkpoint: dims, seed, then parameter tensors in shortest
// round-trip notation. load(save(m)) reproduces the parameters bit-exactly.
void save_model(const MlpModel& m, const std::string& path, std::uint64_t seed);
MlpModel load_model(const std::string& path, std::uint64_t* seed_out = nullptr);

} // namespace lamc
