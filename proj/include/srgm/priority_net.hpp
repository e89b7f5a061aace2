#pragma once

// Three-layer feed-forward network (sensory -> association -> response)
// with logistic activations, trained by full-batch backpropagation on the
// half squared error. Response outputs normalize into importance weights.

#include <cstdint>
#include <span>
#include <vector>

namespace srgm {

/// Row-major p x q and q x r weight matrices plus the sigmoid gain.
struct NetworkWeights {
    std::size_t inputs = 0;   // p
    std::size_t hidden = 0;   // q
    std::size_t outputs = 0;  // r
    std::vector<double> w1;   // w1[i * hidden + j]
    std::vector<double> w2;   // w2[j * outputs + k]
    double theta = 1.0;
    std::uint64_t seed = 0;

    /// InputError on inconsistent sizes, non-finite entries or theta <= 0.
    void validate() const;

    double& at1(std::size_t i, std::size_t j) { return w1[i * hidden + j]; }
    double& at2(std::size_t j, std::size_t k) { return w2[j * outputs + k]; }
    double at1(std::size_t i, std::size_t j) const { return w1[i * hidden + j]; }
    double at2(std::size_t j, std::size_t k) const { return w2[j * outputs + k]; }

    /// Entries uniform on [-0.5, 0.5] drawn from the seed.
    static NetworkWeights random(std::size_t p, std::size_t q, std::size_t r, double theta,
                                 std::uint64_t seed);

    bool operator==(const NetworkWeights&) const = default;
};

double sigmoid(double x, double theta);

struct ForwardResult {
    std::vector<double> hidden;
    std::vector<double> output;
};

ForwardResult forward(const NetworkWeights& weights, std::span<const double> x);

/// 0.5 * sum_k (y_k - d_k)^2
double loss(std::span<const double> y, std::span<const double> d);

struct TrainingSample {
    std::vector<double> x;
    std::vector<double> d;
};

using TrainingSet = std::vector<TrainingSample>;

struct Gradients {
    std::vector<double> w1;
    std::vector<double> w2;
    double loss = 0.0;
};

/// Exact gradient of the loss summed over all samples.
Gradients gradients(const NetworkWeights& weights, const TrainingSet& data);

struct TrainOptions {
    double learning_rate = 0.5;
    int epochs = 5000;
};

struct TrainResult {
    NetworkWeights weights;
    std::vector<double> loss_history;  ///< loss before each update
    double final_loss = 0.0;
};

/// Full-batch gradient descent from `initial`. InputError for an empty or
/// inconsistent training set or a negative learning rate; NumericError with
/// the epoch index when the loss becomes non-finite.
TrainResult train_backprop(const NetworkWeights& initial, const TrainingSet& data,
                           const TrainOptions& options);

struct ImportanceVector {
    std::vector<double> p;
    bool degenerate = false;  ///< all-zero input, uniform weights returned
};

/// p_k = y_k / sum(y). InputError for negative or non-finite entries.
ImportanceVector importance_weights(std::span<const double> y);

}  // namespace srgm
