#include "srgm/priority_net.hpp"

#include <cmath>
#include <random>
#include <string>

#include "srgm/error.hpp"
#include "srgm/kernels.hpp"

namespace srgm {
namespace {

void require_sizes(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw InputError(std::string(what) + ": expected length " + std::to_string(want) +
                         ", got " + std::to_string(got));
    }
}

std::span<const double> row(const std::vector<double>& m, std::size_t r, std::size_t cols) {
    return std::span<const double>(m).subspan(r * cols, cols);
}

std::span<double> row(std::vector<double>& m, std::size_t r, std::size_t cols) {
    return std::span<double>(m).subspan(r * cols, cols);
}

void check_sample(const NetworkWeights& w, const TrainingSample& s) {
    require_sizes(s.x.size(), w.inputs, "training input");
    require_sizes(s.d.size(), w.outputs, "training target");
}

}  // namespace

void NetworkWeights::validate() const {
    if (inputs == 0 || hidden == 0 || outputs == 0) {
        throw InputError("network layer sizes must be positive");
    }
    require_sizes(w1.size(), inputs * hidden, "w1");
    require_sizes(w2.size(), hidden * outputs, "w2");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw InputError("sigmoid gain must be positive");
    for (double v : w1) {
        if (!std::isfinite(v)) throw InputError("w1 has a non-finite entry");
    }
    for (double v : w2) {
        if (!std::isfinite(v)) throw InputError("w2 has a non-finite entry");
    }
}

NetworkWeights NetworkWeights::random(std::size_t p, std::size_t q, std::size_t r, double theta,
                                      std::uint64_t seed) {
    NetworkWeights w{p, q, r, std::vector<double>(p * q), std::vector<double>(q * r), theta, seed};
    std::mt19937_64 rng(seed);
    auto draw = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
    for (double& v : w.w1) v = draw();
    for (double& v : w.w2) v = draw();
    w.validate();
    return w;
}

double sigmoid(double x, double theta) {
    if (!(theta > 0.0)) throw InputError("sigmoid gain must be positive");
    return 1.0 / (1.0 + std::exp(-theta * x));
}

ForwardResult forward(const NetworkWeights& w, std::span<const double> x) {
    w.validate();
    require_sizes(x.size(), w.inputs, "network input");
    ForwardResult r{std::vector<double>(w.hidden, 0.0), std::vector<double>(w.outputs, 0.0)};
    for (std::size_t i = 0; i < w.inputs; ++i) kernels::axpy(x[i], row(w.w1, i, w.hidden), r.hidden);
    kernels::sigmoid(w.theta, r.hidden, r.hidden);
    for (std::size_t j = 0; j < w.hidden; ++j) {
        kernels::axpy(r.hidden[j], row(w.w2, j, w.outputs), r.output);
    }
    kernels::sigmoid(w.theta, r.output, r.output);
    return r;
}

double loss(std::span<const double> y, std::span<const double> d) {
    require_sizes(d.size(), y.size(), "loss target");
    double sum = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) sum += (y[k] - d[k]) * (y[k] - d[k]);
    return 0.5 * sum;
}

Gradients gradients(const NetworkWeights& w, const TrainingSet& data) {
    Gradients g{std::vector<double>(w.w1.size(), 0.0), std::vector<double>(w.w2.size(), 0.0), 0.0};
    std::vector<double> delta_out(w.outputs);
    std::vector<double> delta_hidden(w.hidden);
    for (const auto& s : data) {
        check_sample(w, s);
        const ForwardResult f = forward(w, s.x);
        g.loss += loss(f.output, s.d);
        for (std::size_t k = 0; k < w.outputs; ++k) {
            const double y = f.output[k];
            delta_out[k] = (y - s.d[k]) * w.theta * y * (1.0 - y);
        }
        for (std::size_t j = 0; j < w.hidden; ++j) {
            const double h = f.hidden[j];
            delta_hidden[j] = kernels::dot(row(w.w2, j, w.outputs), delta_out) * w.theta * h * (1.0 - h);
            kernels::axpy(h, delta_out, row(g.w2, j, w.outputs));
        }
        for (std::size_t i = 0; i < w.inputs; ++i) {
            kernels::axpy(s.x[i], delta_hidden, row(g.w1, i, w.hidden));
        }
    }
    return g;
}

TrainResult train_backprop(const NetworkWeights& initial, const TrainingSet& data,
                           const TrainOptions& options) {
    initial.validate();
    if (data.empty()) throw InputError("training set is empty");
    for (const auto& s : data) check_sample(initial, s);
    if (!(options.learning_rate >= 0.0) || !std::isfinite(options.learning_rate)) {
        throw InputError("learning rate must be nonnegative");
    }
    if (options.epochs < 0) throw InputError("epoch count must be nonnegative");

    TrainResult result{initial, {}, 0.0};
    result.loss_history.reserve(static_cast<std::size_t>(options.epochs));
    NetworkWeights& w = result.weights;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        const Gradients g = gradients(w, data);
        if (!std::isfinite(g.loss)) {
            throw NumericError("training loss became non-finite at epoch " + std::to_string(epoch));
        }
        result.loss_history.push_back(g.loss);
        if (options.learning_rate == 0.0) continue;
        kernels::axpy(-options.learning_rate, g.w1, w.w1);
        kernels::axpy(-options.learning_rate, g.w2, w.w2);
    }
    double final_loss = 0.0;
    for (const auto& s : data) final_loss += loss(forward(w, s.x).output, s.d);
    if (!std::isfinite(final_loss)) {
        throw NumericError("training loss became non-finite at epoch " +
                           std::to_string(options.epochs));
    }
    result.final_loss = final_loss;
    return result;
}

ImportanceVector importance_weights(std::span<const double> y) {
    if (y.empty()) throw InputError("importance weights need at least one output");
    double sum = 0.0;
    for (double v : y) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InputError("importance weights need finite nonnegative outputs");
        }
        sum += v;
    }
    ImportanceVector out;
    out.p.resize(y.size());
    if (!(sum > 0.0)) {
        out.degenerate = true;
        for (double& p : out.p) p = 1.0 / static_cast<double>(y.size());
        return out;
    }
    for (std::size_t k = 0; k < y.size(); ++k) out.p[k] = y[k] / sum;
    return out;
}

}  // namespace srgm
