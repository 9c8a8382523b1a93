// optimizer.hpp - adaptive-moment parameter updates and soft target updates.
#pragma once

#include "igx/common.hpp"
#include "igx/network.hpp"

#include <vector>

namespace igx {

struct LayerMoments {
    Mat m_weight, v_weight;
    Vec m_bias, v_bias;
};

// First/second moment accumulators for one or more networks (the ICM trains
// its three nets under a single state).  Moments are laid out per layer in
// the order the networks were registered.
struct OptimizerState {
    std::vector<LayerMoments> moments;
    long step_count = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

namespace detail {
inline void append_moments(OptimizerState& state, const NetworkParams& net) {
    for (const auto& l : net.layers) {
        LayerMoments lm;
        lm.m_weight = Mat::Zero(l.weight.rows(), l.weight.cols());
        lm.v_weight = Mat::Zero(l.weight.rows(), l.weight.cols());
        lm.m_bias = Vec::Zero(l.bias.size());
        lm.v_bias = Vec::Zero(l.bias.size());
        state.moments.push_back(std::move(lm));
    }
}

template <typename Tensor>
inline void adam_update(Tensor& param, Tensor& m, Tensor& v, const Tensor& grad,
                        const OptimizerState& s, double bias1, double bias2) {
    m = s.beta1 * m + (1.0 - s.beta1) * grad;
    v = (s.beta2 * v.array() + (1.0 - s.beta2) * grad.array().square()).matrix();
    param.array() -= s.learning_rate * (m.array() / bias1) / ((v.array() / bias2).sqrt() + s.epsilon);
}
}  // namespace detail

inline OptimizerState make_optimizer(const NetworkParams& net, double learning_rate) {
    OptimizerState state;
    state.learning_rate = learning_rate;
    detail::append_moments(state, net);
    return state;
}

inline OptimizerState make_optimizer(const std::vector<const NetworkParams*>& nets, double learning_rate) {
    OptimizerState state;
    state.learning_rate = learning_rate;
    for (const auto* net : nets) detail::append_moments(state, *net);
    return state;
}

// One bias-corrected adaptive-moment step over several networks sharing one
// state.  Pass nullptr in `grads` to leave a network untouched this step
// (its moments still decay consistently via a zero gradient).
inline void optimizer_step(OptimizerState& state, const std::vector<NetworkParams*>& nets,
                           const std::vector<const Gradients*>& grads) {
    if (nets.size() != grads.size())
        throw std::invalid_argument("optimizer_step: nets/grads arity mismatch");
    std::size_t total_layers = 0;
    for (const auto* net : nets) total_layers += net->layers.size();
    if (total_layers != state.moments.size())
        throw std::invalid_argument("optimizer_step: state does not match networks");

    for (std::size_t k = 0; k < nets.size(); ++k) {
        if (!grads[k]) continue;
        if (grads[k]->weight.size() != nets[k]->layers.size())
            throw std::invalid_argument("optimizer_step: gradient shape mismatch");
        for (std::size_t i = 0; i < nets[k]->layers.size(); ++i) {
            if (!grads[k]->weight[i].allFinite() || !grads[k]->bias[i].allFinite())
                throw DivergenceError("optimizer_step: non-finite gradient");
        }
    }

    state.step_count += 1;
    const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

    std::size_t mi = 0;
    for (std::size_t k = 0; k < nets.size(); ++k) {
        for (std::size_t i = 0; i < nets[k]->layers.size(); ++i, ++mi) {
            Layer& l = nets[k]->layers[i];
            LayerMoments& lm = state.moments[mi];
            const Mat gw = grads[k] ? grads[k]->weight[i] : Mat::Zero(l.weight.rows(), l.weight.cols());
            const Vec gb = grads[k] ? grads[k]->bias[i] : Vec::Zero(l.bias.size());
            detail::adam_update(l.weight, lm.m_weight, lm.v_weight, gw, state, bias1, bias2);
            detail::adam_update(l.bias, lm.m_bias, lm.v_bias, gb, state, bias1, bias2);
        }
    }
}

inline void optimizer_step(OptimizerState& state, NetworkParams& net, const Gradients& grads) {
    optimizer_step(state, {&net}, {&grads});
}

// target' = (1 - tau) * target + tau * online, per parameter.
inline void soft_update(NetworkParams& target, const NetworkParams& online, double tau) {
    if (!shapes_congruent(target, online))
        throw std::invalid_argument("soft_update: shape mismatch");
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("soft_update: tau must be in [0,1]");
    for (std::size_t i = 0; i < target.layers.size(); ++i) {
        target.layers[i].weight = (1.0 - tau) * target.layers[i].weight + tau * online.layers[i].weight;
        target.layers[i].bias = (1.0 - tau) * target.layers[i].bias + tau * online.layers[i].bias;
    }
}

}  // namespace igx
