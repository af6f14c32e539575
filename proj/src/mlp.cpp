#include "sigver/mlp.hpp"

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"

#include <algorithm>
#include <cmath>

namespace sigver {

namespace {

// Pre-activations are clamped so the output stays strictly inside (0,1)
// in double precision even for saturated units.
double sigmoid(double z) {
    z = std::clamp(z, -36.7, 36.7);
    return 1.0 / (1.0 + std::exp(-z));
}

struct ForwardPass {
    std::vector<double> hidden; // post-activation
    double out = 0.0;
};

ForwardPass run_forward(const Perceptron& p, std::span<const double> x) {
    ForwardPass fp;
    int ni = p.n_in();
    int nh = p.n_hidden();
    fp.hidden.resize(static_cast<std::size_t>(nh));
    const std::vector<double>& w1 = p.w1();
    const std::vector<double>& w2 = p.w2();
    for (int h = 0; h < nh; ++h) {
        const double* row = w1.data() + static_cast<std::size_t>(h) * (ni + 1);
        double z = row[ni]; // bias
        for (int i = 0; i < ni; ++i) z += row[i] * x[static_cast<std::size_t>(i)];
        fp.hidden[static_cast<std::size_t>(h)] = sigmoid(z);
    }
    double z = w2[static_cast<std::size_t>(nh)];
    for (int h = 0; h < nh; ++h) z += w2[static_cast<std::size_t>(h)] * fp.hidden[static_cast<std::size_t>(h)];
    fp.out = sigmoid(z);
    return fp;
}

// Backprop into preallocated buffers; returns the output error (y - t).
double accumulate_gradient(const Perceptron& p, std::span<const double> x, double target,
                           std::vector<double>& g1, std::vector<double>& g2) {
    int ni = p.n_in();
    int nh = p.n_hidden();
    ForwardPass fp = run_forward(p, x);

    double err = fp.out - target;
    double delta_out = err * fp.out * (1.0 - fp.out);
    for (int h = 0; h < nh; ++h)
        g2[static_cast<std::size_t>(h)] += delta_out * fp.hidden[static_cast<std::size_t>(h)];
    g2[static_cast<std::size_t>(nh)] += delta_out;

    const std::vector<double>& w2 = p.w2();
    for (int h = 0; h < nh; ++h) {
        double hv = fp.hidden[static_cast<std::size_t>(h)];
        double delta_h = delta_out * w2[static_cast<std::size_t>(h)] * hv * (1.0 - hv);
        double* grow = g1.data() + static_cast<std::size_t>(h) * (ni + 1);
        for (int i = 0; i < ni; ++i) grow[i] += delta_h * x[static_cast<std::size_t>(i)];
        grow[ni] += delta_h;
    }
    return err;
}

void check_input(const Perceptron& p, std::size_t got) {
    if (static_cast<int>(got) != p.n_in())
        raise(Errc::dimension_mismatch, "input length " + std::to_string(got) +
                                            " does not match network input size " +
                                            std::to_string(p.n_in()));
}

} // namespace

Perceptron::Perceptron(int n_in, int n_hidden)
    : n_in_(n_in), n_hidden_(n_hidden),
      w1_(static_cast<std::size_t>(n_hidden) * (n_in + 1), 0.0),
      w2_(static_cast<std::size_t>(n_hidden) + 1, 0.0) {}

Perceptron Perceptron::init(int n_in, int n_hidden, std::uint64_t seed) {
    Perceptron p(n_in, n_hidden);
    Rng rng(seed);
    for (double& w : p.w1_) w = rng.uniform(-0.5, 0.5);
    for (double& w : p.w2_) w = rng.uniform(-0.5, 0.5);
    return p;
}

double Perceptron::forward(std::span<const double> x) const {
    check_input(*this, x.size());
    return run_forward(*this, x).out;
}

Gradient gradient(const Perceptron& p, std::span<const double> x, double target) {
    check_input(p, x.size());
    Gradient g;
    g.g1.assign(p.w1().size(), 0.0);
    g.g2.assign(p.w2().size(), 0.0);
    accumulate_gradient(p, x, target, g.g1, g.g2);
    return g;
}

TrainResult train(Perceptron& p, const std::vector<Sample>& samples, const TrainConfig& cfg) {
    if (samples.empty()) raise(Errc::too_few_samples, "empty training set");
    for (const Sample& s : samples) check_input(p, s.x.size());

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> vel1(p.w1().size(), 0.0), vel2(p.w2().size(), 0.0);
    std::vector<double> g1(p.w1().size()), g2(p.w2().size());

    auto apply_update = [&](double scale) {
        for (std::size_t i = 0; i < p.w1().size(); ++i) {
            vel1[i] = cfg.momentum * vel1[i] - cfg.learning_rate * scale * g1[i];
            p.w1()[i] += vel1[i];
        }
        for (std::size_t i = 0; i < p.w2().size(); ++i) {
            vel2[i] = cfg.momentum * vel2[i] - cfg.learning_rate * scale * g2[i];
            p.w2()[i] += vel2[i];
        }
    };

    TrainResult res;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        rng.shuffle(order);
        double sq_sum = 0.0;
        if (cfg.full_batch) {
            std::fill(g1.begin(), g1.end(), 0.0);
            std::fill(g2.begin(), g2.end(), 0.0);
            for (std::size_t idx : order) {
                double err = accumulate_gradient(p, samples[idx].x, samples[idx].target, g1, g2);
                sq_sum += err * err;
            }
            apply_update(1.0 / static_cast<double>(samples.size()));
        } else {
            for (std::size_t idx : order) {
                std::fill(g1.begin(), g1.end(), 0.0);
                std::fill(g2.begin(), g2.end(), 0.0);
                double err = accumulate_gradient(p, samples[idx].x, samples[idx].target, g1, g2);
                sq_sum += err * err;
                apply_update(1.0);
            }
        }
        double mse = sq_sum / static_cast<double>(samples.size());
        if (!std::isfinite(mse)) raise(Errc::non_finite_loss, "training diverged");
        for (double w : p.w1())
            if (!std::isfinite(w)) raise(Errc::non_finite_loss, "hidden weights diverged");
        for (double w : p.w2())
            if (!std::isfinite(w)) raise(Errc::non_finite_loss, "output weights diverged");
        res.final_mse = mse;
        res.epochs_run = epoch;
        if (mse <= cfg.target_mse) break;
    }
    return res;
}

} // namespace sigver
