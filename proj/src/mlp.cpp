#include "lamc/mlp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "lamc/errors.hpp"

namespace lamc {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

MlpModel MlpModel::init(std::size_t input_dim, std::size_t hidden_dim,
                        std::size_t output_dim, std::uint64_t seed) {
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 2)
        throw ConfigError("mlp: need d >= 1, h >= 1, K >= 2");
    MlpModel m;
    m.w1 = Matrix(hidden_dim, input_dim);
    m.b1.assign(hidden_dim, 0.0);
    m.w2 = Matrix(output_dim, hidden_dim);
    m.b2.assign(output_dim, 0.0);

    std::mt19937_64 rng(seed);
    const auto glorot = [&](Matrix& w, std::size_t fan_in, std::size_t fan_out) {
        const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> u(-a, a);
        for (double& v : w.data) v = u(rng);
    };
    glorot(m.w1, input_dim, hidden_dim);
    glorot(m.w2, hidden_dim, output_dim);
    return m;
}

std::vector<double> MlpModel::forward(std::span<const double> x) const {
    if (x.size() != input_dim())
        throw ShapeError("forward: input has " + std::to_string(x.size()) +
                         " features, model expects " + std::to_string(input_dim()));
    const std::size_t h = hidden_dim();
    const std::size_t k = output_dim();
    std::vector<double> a1(h);
    for (std::size_t j = 0; j < h; ++j) {
        double z = b1[j];
        const double* row = w1.data.data() + j * w1.cols;
        for (std::size_t l = 0; l < x.size(); ++l) z += row[l] * x[l];
        a1[j] = z > 0.0 ? z : 0.0;
    }
    std::vector<double> scores(k);
    for (std::size_t i = 0; i < k; ++i) {
        double z = b2[i];
        const double* row = w2.data.data() + i * w2.cols;
        for (std::size_t j = 0; j < h; ++j) z += row[j] * a1[j];
        scores[i] = sigmoid(z);
    }
    return scores;
}

bool MlpModel::finite() const {
    const auto ok = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    return ok(w1.data) && ok(b1) && ok(w2.data) && ok(b2);
}

bool MlpModel::same_shape(const MlpModel& o) const {
    return w1.same_shape(o.w1) && w2.same_shape(o.w2) && b1.size() == o.b1.size() &&
           b2.size() == o.b2.size();
}

MlpGradients MlpGradients::zeros_like(const MlpModel& m) {
    MlpGradients g;
    g.w1 = Matrix(m.w1.rows, m.w1.cols);
    g.b1.assign(m.b1.size(), 0.0);
    g.w2 = Matrix(m.w2.rows, m.w2.cols);
    g.b2.assign(m.b2.size(), 0.0);
    return g;
}

AdamState AdamState::init(const MlpModel& m, double learning_rate) {
    AdamState s;
    s.m_w1 = Matrix(m.w1.rows, m.w1.cols);
    s.v_w1 = Matrix(m.w1.rows, m.w1.cols);
    s.m_b1.assign(m.b1.size(), 0.0);
    s.v_b1.assign(m.b1.size(), 0.0);
    s.m_w2 = Matrix(m.w2.rows, m.w2.cols);
    s.v_w2 = Matrix(m.w2.rows, m.w2.cols);
    s.m_b2.assign(m.b2.size(), 0.0);
    s.v_b2.assign(m.b2.size(), 0.0);
    s.learning_rate = learning_rate;
    return s;
}

void AdamState::update(MlpModel& model, const MlpGradients& g) {
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    const auto apply = [&](double* p, double* m, double* v, const double* grad,
                           std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= learning_rate * mhat / (std::sqrt(vhat) + eps);
        }
    };
    apply(model.w1.data.data(), m_w1.data.data(), v_w1.data.data(),
          g.w1.data.data(), model.w1.data.size());
    apply(model.b1.data(), m_b1.data(), v_b1.data(), g.b1.data(), model.b1.size());
    apply(model.w2.data.data(), m_w2.data.data(), v_w2.data.data(),
          g.w2.data.data(), model.w2.data.size());
    apply(model.b2.data(), m_b2.data(), v_b2.data(), g.b2.data(), model.b2.size());
}

namespace {

void write_values(std::ofstream& out, const char* name,
                  std::span<const double> v) {
    out << name;
    char buf[64];
    for (double x : v) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), x);
        out.put(' ');
        out.write(buf, res.ptr - buf);
    }
    out.put('\n');
}

void read_values(std::ifstream& in, const std::string& expect,
                 std::span<double> v, const std::string& path) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path + ": truncated checkpoint, expected '" + expect + "'");
    std::istringstream ss(line);
    std::string name;
    ss >> name;
    if (name != expect)
        throw ParseError(path + ": expected tensor '" + expect + "', got '" +
                         name + "'");
    std::string tok;
    for (double& x : v) {
        if (!(ss >> tok))
            throw ParseError(path + ": tensor '" + expect + "' too short");
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            throw ParseError(path + ": bad value '" + tok + "' in tensor '" +
                             expect + "'");
    }
    if (ss >> tok)
        throw ParseError(path + ": tensor '" + expect + "' too long");
}

} // namespace

void save_model(const MlpModel& m, const std::string& path, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out << "lamc-mlp 1\n";
    out << "dims " << m.input_dim() << ' ' << m.hidden_dim() << ' '
        << m.output_dim() << '\n';
    out << "seed " << seed << '\n';
    write_values(out, "w1", m.w1.data);
    write_values(out, "b1", m.b1);
    write_values(out, "w2", m.w2.data);
    write_values(out, "b2", m.b2);
    if (!out) throw IoError("write failed: " + path);
}

MlpModel load_model(const std::string& path, std::uint64_t* seed_out) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "lamc-mlp" || version != 1)
        throw ParseError(path + ": not a lamc-mlp v1 checkpoint");
    std::string key;
    std::size_t d = 0, h = 0, k = 0;
    if (!(in >> key >> d >> h >> k) || key != "dims")
        throw ParseError(path + ": missing dims");
    std::uint64_t seed = 0;
    if (!(in >> key >> seed) || key != "seed")
        throw ParseError(path + ": missing seed");
    in.ignore(1, '\n');

    MlpModel m;
    m.w1 = Matrix(h, d);
    m.b1.assign(h, 0.0);
    m.w2 = Matrix(k, h);
    m.b2.assign(k, 0.0);
    read_values(in, "w1", m.w1.data, path);
    read_values(in, "b1", m.b1, path);
    read_values(in, "w2", m.w2.data, path);
    read_values(in, "b2", m.b2, path);
    if (seed_out) *seed_out = seed;
    return m;
}

} // namespace lamc
