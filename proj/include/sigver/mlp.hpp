#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sigver {

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    int max_epochs = 1000;
    double target_mse = 1e-3;
    std::uint64_t seed = 0;
    bool full_batch = false; // single accumulated update per epoch
};

// input -> one sigmoid hidden layer -> single sigmoid output
class Perceptron {
public:
    Perceptron() = default;
    Perceptron(int n_in, int n_hidden);

    // weights drawn uniformly from [-0.5, 0.5]; same seed, same network
    static Perceptron init(int n_in, int n_hidden, std::uint64_t seed);

    int n_in() const { return n_in_; }
    int n_hidden() const { return n_hidden_; }

    double forward(std::span<const double> x) const;

    // w1: n_hidden x (n_in + 1), bias last column. w2: n_hidden + 1.
    std::vector<double>& w1() { return w1_; }
    std::vector<double>& w2() { return w2_; }
    const std::vector<double>& w1() const { return w1_; }
    const std::vector<double>& w2() const { return w2_; }

    bool operator==(const Perceptron&) const = default;

private:
    int n_in_ = 0;
    int n_hidden_ = 0;
    std::vector<double> w1_;
    std::vector<double> w2_;
};

struct Gradient {
    std::vector<double> g1;
    std::vector<double> g2;
};

// d/dw of 0.5 (forward(x) - target)^2 for a single sample
Gradient gradient(const Perceptron& p, std::span<const double> x, double target);

struct Sample {
    std::vector<double> x;
    double target = 0.0; // 0 or 1
};

struct TrainResult {
    double final_mse = 0.0;
    int epochs_run = 0;
};

// Stochastic (or full-batch) gradient descent with momentum on squared
// error; samples are reshuffled each epoch from cfg.seed. Stops once the
// epoch MSE reaches cfg.target_mse.
TrainResult train(Perceptron& p, const std::vector<Sample>& samples, const TrainConfig& cfg);

} // namespace sigver
