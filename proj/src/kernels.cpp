#include "lamc/kernels.hpp"

#include <cmath>

#include "lamc/errors.hpp"

namespace lamc::kernels {

namespace {

void check_forward_shapes(const MlpModel& m, const Matrix& x, Matrix& hidden,
                          Matrix& scores) {
    if (x.cols != m.input_dim())
        throw ShapeError("forward_batch: input width " + std::to_string(x.cols) +
                         " != model input dim " + std::to_string(m.input_dim()));
    if (hidden.rows != x.rows || hidden.cols != m.hidden_dim())
        hidden = Matrix(x.rows, m.hidden_dim());
    if (scores.rows != x.rows || scores.cols != m.output_dim())
        scores = Matrix(x.rows, m.output_dim());
}

void check_backward_shapes(const MlpModel& m, const Matrix& x,
                           const Matrix& hidden, const Matrix& dz2,
                           MlpGradients& g) {
    if (x.cols != m.input_dim() || hidden.cols != m.hidden_dim() ||
        dz2.cols != m.output_dim() || hidden.rows != x.rows ||
        dz2.rows != x.rows)
        throw ShapeError("backward_batch: shape mismatch");
    if (!g.w1.same_shape(m.w1) || !g.w2.same_shape(m.w2))
        g = MlpGradients::zeros_like(m);
}

} // namespace

void forward_batch(const MlpModel& m, const Matrix& x, Matrix& hidden,
                   Matrix& scores) {
    check_forward_shapes(m, x, hidden, scores);
    const std::ptrdiff_t batch = static_cast<std::ptrdiff_t>(x.rows);
    const std::size_t d = m.input_dim();
    const std::size_t h = m.hidden_dim();
    const std::size_t k = m.output_dim();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < batch; ++n) {
        const double* xn = x.data.data() + n * static_cast<std::ptrdiff_t>(d);
        double* a1 = hidden.data.data() + n * static_cast<std::ptrdiff_t>(h);
        double* out = scores.data.data() + n * static_cast<std::ptrdiff_t>(k);
        for (std::size_t j = 0; j < h; ++j) {
            double z = m.b1[j];
            const double* w = m.w1.data.data() + j * d;
            for (std::size_t l = 0; l < d; ++l) z += w[l] * xn[l];
            a1[j] = z > 0.0 ? z : 0.0;
        }
        for (std::size_t i = 0; i < k; ++i) {
            double z = m.b2[i];
            const double* w = m.w2.data.data() + i * h;
            for (std::size_t j = 0; j < h; ++j) z += w[j] * a1[j];
            out[i] = sigmoid(z);
        }
    }
}

void backward_batch(const MlpModel& m, const Matrix& x, const Matrix& hidden,
                    const Matrix& dz2, MlpGradients& g) {
    check_backward_shapes(m, x, hidden, dz2, g);
    const std::size_t batch = x.rows;
    const std::size_t d = m.input_dim();
    const std::size_t h = m.hidden_dim();
    const std::size_t k = m.output_dim();
    const double inv_batch = 1.0 / static_cast<double>(batch);

    // layer 2: each (i, j) cell reduces over the batch in index order
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
        double* gw = g.w2.data.data() + i * static_cast<std::ptrdiff_t>(h);
        double gb = 0.0;
        for (std::size_t j = 0; j < h; ++j) {
            double s = 0.0;
            for (std::size_t n = 0; n < batch; ++n)
                s += dz2.at(n, i) * hidden.at(n, j);
            gw[j] = s * inv_batch;
        }
        for (std::size_t n = 0; n < batch; ++n) gb += dz2.at(n, i);
        g.b2[i] = gb * inv_batch;
    }

    // hidden deltas: disjoint rows
    Matrix dz1(batch, h);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(batch); ++n) {
        const double* a1 = hidden.data.data() + n * static_cast<std::ptrdiff_t>(h);
        double* row = dz1.data.data() + n * static_cast<std::ptrdiff_t>(h);
        for (std::size_t j = 0; j < h; ++j) {
            if (a1[j] <= 0.0) { // relu inactive
                row[j] = 0.0;
                continue;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                s += m.w2.at(i, j) * dz2.at(n, i);
            row[j] = s;
        }
    }

    // layer 1
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(h); ++j) {
        double* gw = g.w1.data.data() + j * static_cast<std::ptrdiff_t>(d);
        double gb = 0.0;
        for (std::size_t l = 0; l < d; ++l) {
            double s = 0.0;
            for (std::size_t n = 0; n < batch; ++n)
                s += dz1.at(n, j) * x.at(n, l);
            gw[l] = s * inv_batch;
        }
        for (std::size_t n = 0; n < batch; ++n) gb += dz1.at(n, j);
        g.b1[j] = gb * inv_batch;
    }
}

Matrix score_matrix(const MlpModel& m, const MultiLabelDataset& ds) {
    Matrix hidden, scores;
    forward_batch(m, ds.features, hidden, scores);
    return scores;
}

namespace serial {

void forward_batch(const MlpModel& m, const Matrix& x, Matrix& hidden,
                   Matrix& scores) {
    check_forward_shapes(m, x, hidden, scores);
    const std::size_t d = m.input_dim();
    const std::size_t h = m.hidden_dim();
    const std::size_t k = m.output_dim();
    for (std::size_t n = 0; n < x.rows; ++n) {
        const double* xn = x.data.data() + n * d;
        double* a1 = hidden.data.data() + n * h;
        double* out = scores.data.data() + n * k;
        for (std::size_t j = 0; j < h; ++j) {
            double z = m.b1[j];
            const double* w = m.w1.data.data() + j * d;
            for (std::size_t l = 0; l < d; ++l) z += w[l] * xn[l];
            a1[j] = z > 0.0 ? z : 0.0;
        }
        for (std::size_t i = 0; i < k; ++i) {
            double z = m.b2[i];
            const double* w = m.w2.data.data() + i * h;
            for (std::size_t j = 0; j < h; ++j) z += w[j] * a1[j];
            out[i] = sigmoid(z);
        }
    }
}

void backward_batch(const MlpModel& m, const Matrix& x, const Matrix& hidden,
                    const Matrix& dz2, MlpGradients& g) {
    check_backward_shapes(m, x, hidden, dz2, g);
    const std::size_t batch = x.rows;
    const std::size_t d = m.input_dim();
    const std::size_t h = m.hidden_dim();
    const std::size_t k = m.output_dim();
    const double inv_batch = 1.0 / static_cast<double>(batch);

    for (std::size_t i = 0; i < k; ++i) {
        double* gw = g.w2.data.data() + i * h;
        double gb = 0.0;
        for (std::size_t j = 0; j < h; ++j) {
            double s = 0.0;
            for (std::size_t n = 0; n < batch; ++n)
                s += dz2.at(n, i) * hidden.at(n, j);
            gw[j] = s * inv_batch;
        }
        for (std::size_t n = 0; n < batch; ++n) gb += dz2.at(n, i);
        g.b2[i] = gb * inv_batch;
    }

    Matrix dz1(batch, h);
    for (std::size_t n = 0; n < batch; ++n) {
        const double* a1 = hidden.data.data() + n * h;
        double* row = dz1.data.data() + n * h;
        for (std::size_t j = 0; j < h; ++j) {
            if (a1[j] <= 0.0) {
                row[j] = 0.0;
                continue;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                s += m.w2.at(i, j) * dz2.at(n, i);
            row[j] = s;
        }
    }

    for (std::size_t j = 0; j < h; ++j) {
        double* gw = g.w1.data.data() + j * d;
        double gb = 0.0;
        for (std::size_t l = 0; l < d; ++l) {
            double s = 0.0;
            for (std::size_t n = 0; n < batch; ++n)
                s += dz1.at(n, j) * x.at(n, l);
            gw[l] = s * inv_batch;
        }
        for (std::size_t n = 0; n < batch; ++n) gb += dz1.at(n, j);
        g.b1[j] = gb * inv_batch;
    }
}

Matrix score_matrix(const MlpModel& m, const MultiLabelDataset& ds) {
    Matrix hidden, scores;
    forward_batch(m, ds.features, hidden, scores);
    return scores;
}

} // namespace serial

} // namespace lamc::kernels
