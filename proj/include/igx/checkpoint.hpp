// checkpoint.hpp - network serialization.
//
// File layout: a text manifest followed by raw parameter bytes.
//
//   IGXNET 1
//   layers <n>
//   layer <in> <out> <activation>     (one line per layer, input to output)
//   data <byte-count>
//   <little-endian 64-bit floats: per layer, weight matrix row-major, then bias>
#pragma once

#include "igx/common.hpp"
#include "igx/network.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace igx {

inline void save_network(const std::filesystem::path& path, const NetworkParams& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());

    std::ostringstream manifest;
    manifest << "IGXNET 1\n";
    manifest << "layers " << net.layers.size() << "\n";
    std::size_t doubles = 0;
    for (const auto& l : net.layers) {
        manifest << "layer " << l.weight.cols() << " " << l.weight.rows() << " "
                 << activation_name(l.activation) << "\n";
        doubles += static_cast<std::size_t>(l.weight.size()) + l.bias.size();
    }
    manifest << "data " << doubles * 8 << "\n";
    out << manifest.str();

    std::vector<std::uint8_t> blob;
    blob.reserve(doubles * 8);
    for (const auto& l : net.layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) put_f64(blob, l.weight(r, c));
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) put_f64(blob, l.bias(i));
    }
    out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

inline NetworkParams load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for read: " + path.string());

    std::string line;
    auto next_line = [&]() -> std::string {
        if (!std::getline(in, line)) throw DecodeError("checkpoint manifest truncated: " + path.string());
        return line;
    };

    if (next_line() != "IGXNET 1") throw DecodeError("bad checkpoint magic: " + path.string());

    std::size_t n_layers = 0;
    {
        std::istringstream ls(next_line());
        std::string tag;
        if (!(ls >> tag >> n_layers) || tag != "layers")
            throw DecodeError("bad layers line: " + path.string());
    }

    NetworkParams net;
    net.layers.resize(n_layers);
    std::size_t doubles = 0;
    for (std::size_t i = 0; i < n_layers; ++i) {
        std::istringstream ls(next_line());
        std::string tag, act;
        Eigen::Index in_dim = 0, out_dim = 0;
        if (!(ls >> tag >> in_dim >> out_dim >> act) || tag != "layer" || in_dim < 1 || out_dim < 1)
            throw DecodeError("bad layer line: " + path.string());
        net.layers[i].weight.resize(out_dim, in_dim);
        net.layers[i].bias.resize(out_dim);
        net.layers[i].activation = activation_from_name(act);
        doubles += static_cast<std::size_t>(in_dim) * out_dim + out_dim;
    }

    std::size_t byte_count = 0;
    {
        std::istringstream ls(next_line());
        std::string tag;
        if (!(ls >> tag >> byte_count) || tag != "data") throw DecodeError("bad data line: " + path.string());
    }
    if (byte_count != doubles * 8) throw DecodeError("data size disagrees with layer shapes: " + path.string());

    std::vector<std::uint8_t> blob(byte_count);
    in.read(reinterpret_cast<char*>(blob.data()), static_cast<std::streamsize>(byte_count));
    if (static_cast<std::size_t>(in.gcount()) != byte_count)
        throw DecodeError("checkpoint data truncated: " + path.string());

    ByteReader reader(blob);
    for (auto& l : net.layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = reader.read_f64();
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = reader.read_f64();
    }
    return net;
}

}  // namespace igx
