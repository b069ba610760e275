#pragma once

#include <fds/dataset.hpp>
#include <fds/error.hpp>
#include <fds/random.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>
#include <span>
#include <sstream>
#include <vector>

namespace fds {

// Small one-class network standing in for a DeepSVDD embedding: two tanh
// hidden layers and a linear output layer, trained by full-batch gradient
// descent to pull real points towards a fixed center.

struct OneClassConfig
{
    std::size_t hidden = 32;
    std::size_t output = 8;
    std::size_t epochs = 200;
    double step = 1e-3;

    friend bool operator==(OneClassConfig const&, OneClassConfig const&) = default;
};

struct DenseLayer
{
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weight; // out x in, row-major
    std::vector<double> bias;   // out

    DenseLayer() = default;
    DenseLayer(std::size_t in_dim, std::size_t out_dim)
        : in(in_dim), out(out_dim), weight(in_dim * out_dim, 0.0), bias(out_dim, 0.0)
    {
    }

    void apply(double const* x, double* y) const noexcept
    {
        for (std::size_t o = 0; o < out; ++o) {
            double s = bias[o];
            double const* w = weight.data() + o * in;
            for (std::size_t i = 0; i < in; ++i) s += w[i] * x[i];
            y[o] = s;
        }
    }
};

struct OneClassEmbedding
{
    DenseLayer hidden1;
    DenseLayer hidden2;
    DenseLayer output;
    std::vector<double> center;
    /// Training loss before the first epoch and after each epoch.
    std::vector<double> loss_history;

    std::size_t input_dim() const noexcept { return hidden1.in; }
    std::size_t output_dim() const noexcept { return output.out; }

    /// Zero-weight network of the configured shape.
    static OneClassEmbedding zeros(std::size_t input_dim, OneClassConfig const& cfg = {})
    {
        OneClassEmbedding e;
        e.hidden1 = DenseLayer(input_dim, cfg.hidden);
        e.hidden2 = DenseLayer(cfg.hidden, cfg.hidden);
        e.output = DenseLayer(cfg.hidden, cfg.output);
        e.center.assign(cfg.output, 0.0);
        return e;
    }

    void forward(std::span<double const> x, std::span<double> y) const
    {
        std::vector<double> a1(hidden1.out), a2(hidden2.out);
        hidden1.apply(x.data(), a1.data());
        for (double& v : a1) v = std::tanh(v);
        hidden2.apply(a1.data(), a2.data());
        for (double& v : a2) v = std::tanh(v);
        output.apply(a2.data(), y.data());
    }
};

inline EmbeddedSet apply_one_class(OneClassEmbedding const& net, EmbeddedSet const& data)
{
    detail::require(data.dim() == net.input_dim(), "one-class embedding expects " + std::to_string(net.input_dim()) +
                                                       " inputs, got " + std::to_string(data.dim()));
    std::size_t const m = net.output_dim();
    std::vector<double> out(data.size() * m);
    for (std::size_t i = 0; i < data.size(); ++i)
        net.forward(data.row(i), std::span<double>(out.data() + i * m, m));
    return EmbeddedSet(data.size(), m, std::move(out), data.tag());
}

namespace detail {

inline double one_class_loss(EmbeddedSet const& outputs, std::span<double const> center)
{
    double total = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        auto y = outputs.row(i);
        for (std::size_t k = 0; k < y.size(); ++k) {
            double const d = y[k] - center[k];
            total += d * d;
        }
    }
    return total / static_cast<double>(outputs.size());
}

} // namespace detail

inline OneClassEmbedding train_one_class_embedding(EmbeddedSet const& real, OneClassConfig const& cfg,
                                                   RandomSource const& rng)
{
    detail::require(real.size() >= 32, "one-class training needs at least 32 real points");
    detail::require(cfg.hidden >= 1 && cfg.output >= 1, "one-class layer widths must be positive");
    detail::require(cfg.step > 0.0, "one-class step size must be positive");

    auto engine = rng.engine();
    OneClassEmbedding net = OneClassEmbedding::zeros(real.dim(), cfg);
    auto init = [&](DenseLayer& layer) {
        std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(layer.in)));
        for (double& w : layer.weight) w = normal(engine);
    };
    init(net.hidden1);
    init(net.hidden2);
    init(net.output);

    std::size_t const n = real.size();
    std::size_t const h = cfg.hidden;
    std::size_t const m = cfg.output;

    {
        auto const y0 = apply_one_class(net, real);
        net.center.assign(m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) net.center[k] += y0(i, k);
        for (double& c : net.center) c /= static_cast<double>(n);
    }

    std::vector<double> a1(n * h), a2(n * h), y(n * m);
    std::vector<double> g_y(m), g_a2(h), g_a1(h);
    DenseLayer grad1(net.hidden1.in, h), grad2(h, h), grad3(h, m);

    auto forward_all = [&] {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double* p1 = a1.data() + i * h;
            double* p2 = a2.data() + i * h;
            double* py = y.data() + i * m;
            net.hidden1.apply(real.data() + i * real.dim(), p1);
            for (std::size_t k = 0; k < h; ++k) p1[k] = std::tanh(p1[k]);
            net.hidden2.apply(p1, p2);
            for (std::size_t k = 0; k < h; ++k) p2[k] = std::tanh(p2[k]);
            net.output.apply(p2, py);
            for (std::size_t k = 0; k < m; ++k) {
                double const d = py[k] - net.center[k];
                loss += d * d;
            }
        }
        return loss / static_cast<double>(n);
    };

    auto check = [&](double loss, std::size_t epoch) {
        if (!std::isfinite(loss)) {
            std::ostringstream msg;
            msg << "one-class training diverged at epoch " << epoch << " (loss " << loss << ", step " << cfg.step
                << ", " << n << " points of dimension " << real.dim() << ")";
            throw NumericalError(msg.str());
        }
    };

    double loss = forward_all();
    check(loss, 0);
    net.loss_history.push_back(loss);

    auto const scale = 2.0 / static_cast<double>(n);
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (DenseLayer* g : {&grad1, &grad2, &grad3}) {
            std::fill(g->weight.begin(), g->weight.end(), 0.0);
            std::fill(g->bias.begin(), g->bias.end(), 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double const* x = real.data() + i * real.dim();
            double const* p1 = a1.data() + i * h;
            double const* p2 = a2.data() + i * h;
            double const* py = y.data() + i * m;
            for (std::size_t k = 0; k < m; ++k) g_y[k] = scale * (py[k] - net.center[k]);

            for (std::size_t o = 0; o < m; ++o) {
                grad3.bias[o] += g_y[o];
                for (std::size_t k = 0; k < h; ++k) grad3.weight[o * h + k] += g_y[o] * p2[k];
            }
            for (std::size_t k = 0; k < h; ++k) {
                double s = 0.0;
                for (std::size_t o = 0; o < m; ++o) s += net.output.weight[o * h + k] * g_y[o];
                g_a2[k] = s * (1.0 - p2[k] * p2[k]);
            }
            for (std::size_t o = 0; o < h; ++o) {
                grad2.bias[o] += g_a2[o];
                for (std::size_t k = 0; k < h; ++k) grad2.weight[o * h + k] += g_a2[o] * p1[k];
            }
            for (std::size_t k = 0; k < h; ++k) {
                double s = 0.0;
                for (std::size_t o = 0; o < h; ++o) s += net.hidden2.weight[o * h + k] * g_a2[o];
                g_a1[k] = s * (1.0 - p1[k] * p1[k]);
            }
            std::size_t const in = net.hidden1.in;
            for (std::size_t o = 0; o < h; ++o) {
                grad1.bias[o] += g_a1[o];
                for (std::size_t k = 0; k < in; ++k) grad1.weight[o * in + k] += g_a1[o] * x[k];
            }
        }
        auto descend = [&](DenseLayer& layer, DenseLayer const& grad) {
            for (std::size_t k = 0; k < layer.weight.size(); ++k) layer.weight[k] -= cfg.step * grad.weight[k];
            for (std::size_t k = 0; k < layer.bias.size(); ++k) layer.bias[k] -= cfg.step * grad.bias[k];
        };
        descend(net.hidden1, grad1);
        descend(net.hidden2, grad2);
        descend(net.output, grad3);

        loss = forward_all();
        check(loss, epoch);
        net.loss_history.push_back(loss);
    }
    return net;
}

inline void to_json(nlohmann::json& j, OneClassConfig const& c)
{
    j = nlohmann::json{{"hidden", c.hidden}, {"output", c.output}, {"epochs", c.epochs}, {"step", c.step}};
}

inline void from_json(nlohmann::json const& j, OneClassConfig& c)
{
    OneClassConfig d;
    c.hidden = j.value("hidden", d.hidden);
    c.output = j.value("output", d.output);
    c.epochs = j.value("epochs", d.epochs);
    c.step = j.value("step", d.step);
}

} // namespace fds
