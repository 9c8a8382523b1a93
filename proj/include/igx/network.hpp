// network.hpp - minimal dense feed-forward networks with exact reverse-mode
// gradients.  Everything is 64-bit; batches are column-major (one sample per
// column) so training updates run as matrix products.
#pragma once

#include "igx/common.hpp"

#include <string>
#include <vector>

namespace igx {

enum class Activation { Rectifier, Identity, SoftmaxOut };

inline std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Rectifier: return "rectifier";
        case Activation::Identity: return "identity";
        case Activation::SoftmaxOut: return "softmax";
    }
    throw std::invalid_argument("unknown activation");
}

inline Activation activation_from_name(const std::string& name) {
    if (name == "rectifier") return Activation::Rectifier;
    if (name == "identity") return Activation::Identity;
    if (name == "softmax") return Activation::SoftmaxOut;
    throw DecodeError("unknown activation name: " + name);
}

struct Layer {
    Mat weight;  // out x in
    Vec bias;    // out
    Activation activation = Activation::Identity;
};

struct NetworkParams {
    std::vector<Layer> layers;

    int input_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols()); }
    int output_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows()); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size()) + l.bias.size();
        return n;
    }
};

struct Gradients {
    std::vector<Mat> weight;
    std::vector<Vec> bias;
};

inline Gradients zero_gradients(const NetworkParams& net) {
    Gradients g;
    g.weight.reserve(net.layers.size());
    g.bias.reserve(net.layers.size());
    for (const auto& l : net.layers) {
        g.weight.push_back(Mat::Zero(l.weight.rows(), l.weight.cols()));
        g.bias.push_back(Vec::Zero(l.bias.size()));
    }
    return g;
}

inline bool shapes_congruent(const NetworkParams& a, const NetworkParams& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        if (a.layers[i].weight.rows() != b.layers[i].weight.rows()) return false;
        if (a.layers[i].weight.cols() != b.layers[i].weight.cols()) return false;
        if (a.layers[i].activation != b.layers[i].activation) return false;
    }
    return true;
}

// Weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)), biases zero.  Hidden layers
// are rectifiers; the caller picks the output activation.
inline NetworkParams init_network(const std::vector<int>& sizes, Activation output_activation,
                                  std::uint64_t seed) {
    if (sizes.size() < 2) throw std::invalid_argument("init_network: need at least input and output sizes");
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("init_network: layer sizes must be >= 1");

    Rng rng(seed);
    NetworkParams net;
    net.layers.resize(sizes.size() - 1);
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        Layer& l = net.layers[i];
        const int fan_in = sizes[i];
        const int fan_out = sizes[i + 1];
        const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
        l.weight = Mat(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c) l.weight(r, c) = rng.uniform(-limit, limit);
        l.bias = Vec::Zero(fan_out);
        l.activation = (i + 2 == sizes.size()) ? output_activation : Activation::Rectifier;
    }
    return net;
}

// Numerically stable column-wise softmax.
inline Mat softmax_columns(const Mat& z) {
    Mat y(z.rows(), z.cols());
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        const Vec shifted = z.col(c).array() - z.col(c).maxCoeff();
        const Vec e = shifted.array().exp();
        y.col(c) = e / e.sum();
    }
    return y;
}

inline Vec softmax(const Vec& z) { return softmax_columns(z); }

// Pre- and post-activations recorded during a forward pass; backward
// consumes them.  `post[i]` is layer i's output, `input` the network input.
struct ForwardTape {
    Mat input;
    std::vector<Mat> pre;
    std::vector<Mat> post;

    // Pre-softmax output of the last layer (the actor's logits).
    const Mat& logits() const { return pre.back(); }
};

inline Mat forward(const NetworkParams& net, const Mat& input, ForwardTape* tape = nullptr) {
    if (net.layers.empty()) throw std::invalid_argument("forward: empty network");
    if (input.rows() != net.input_dim())
        throw std::invalid_argument("forward: input has " + std::to_string(input.rows()) +
                                    " rows, network expects " + std::to_string(net.input_dim()));
    if (tape) {
        tape->input = input;
        tape->pre.clear();
        tape->post.clear();
        tape->pre.reserve(net.layers.size());
        tape->post.reserve(net.layers.size());
    }
    Mat x = input;
    for (const auto& l : net.layers) {
        Mat z = (l.weight * x).colwise() + l.bias;
        if (tape) tape->pre.push_back(z);
        switch (l.activation) {
            case Activation::Rectifier: x = z.cwiseMax(0.0); break;
            case Activation::Identity: x = std::move(z); break;
            case Activation::SoftmaxOut: x = softmax_columns(z); break;
        }
        if (tape) tape->post.push_back(x);
    }
    return x;
}

inline Vec forward(const NetworkParams& net, const Vec& input, ForwardTape* tape = nullptr) {
    return forward(net, Mat(input), tape);
}

// Exact reverse-mode gradients.  `output_gradient` is dL/d(output), one
// column per sample; returns dL/d(input) and fills parameter gradients.
inline Mat backward(const NetworkParams& net, const ForwardTape& tape, const Mat& output_gradient,
                    Gradients* grads) {
    if (tape.pre.size() != net.layers.size())
        throw std::invalid_argument("backward: tape does not match network depth");
    if (output_gradient.rows() != net.output_dim() || output_gradient.cols() != tape.input.cols())
        throw std::invalid_argument("backward: output gradient shape mismatch");

    if (grads) {
        grads->weight.resize(net.layers.size());
        grads->bias.resize(net.layers.size());
    }

    Mat delta = output_gradient;  // dL/d(activation output) of current layer
    for (int i = static_cast<int>(net.layers.size()) - 1; i >= 0; --i) {
        const Layer& l = net.layers[i];
        Mat dz;  // dL/d(pre-activation)
        switch (l.activation) {
            case Activation::Rectifier:
                dz = (tape.pre[i].array() > 0.0).cast<double>() * delta.array();
                break;
            case Activation::Identity:
                dz = std::move(delta);
                break;
            case Activation::SoftmaxOut: {
                const Mat& y = tape.post[i];
                dz.resize(y.rows(), y.cols());
                for (Eigen::Index c = 0; c < y.cols(); ++c) {
                    const double dot = y.col(c).dot(delta.col(c));
                    dz.col(c) = y.col(c).array() * (delta.col(c).array() - dot);
                }
                break;
            }
        }
        const Mat& layer_input = (i == 0) ? tape.input : tape.post[i - 1];
        if (grads) {
            grads->weight[i] = dz * layer_input.transpose();
            grads->bias[i] = dz.rowwise().sum();
        }
        delta = l.weight.transpose() * dz;
    }
    return delta;  // dL/d(input)
}

}  // namespace igx
