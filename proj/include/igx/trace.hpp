// trace.hpp - trajectory trace export.  One CSV row per (episode, step,
// entity); landmarks carry zero actions.  Positions log the state the action
// was taken from, so replaying the actions reproduces the rows.
#pragma once

#include "igx/common.hpp"
#include "igx/env.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace igx {

inline constexpr const char* kTraceHeader = "episode,step,entity,kind,x,y,vx,vy,a0,a1,a2,a3,a4";

struct TraceRow {
    int episode = 0;
    int step = 0;
    int entity = 0;
    EntityKind kind = EntityKind::Landmark;
    double x = 0, y = 0, vx = 0, vy = 0;
    std::array<double, 5> action{};
};

// Shortest round-trippable decimal form; deterministic across runs.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void append_trace_rows(std::vector<TraceRow>& rows, int episode, const WorldState& state,
                              const JointAction& actions, const EnvConfig& config) {
    for (int e = 0; e < config.n_entities(); ++e) {
        TraceRow row;
        row.episode = episode;
        row.step = static_cast<int>(state.step_index);
        row.entity = e;
        row.kind = state.entities[e].kind;
        row.x = state.entities[e].position.x();
        row.y = state.entities[e].position.y();
        row.vx = state.entities[e].velocity.x();
        row.vy = state.entities[e].velocity.y();
        if (e < config.n_agents())
            for (int k = 0; k < 5; ++k) row.action[k] = actions.per_agent[e](k);
        rows.push_back(row);
    }
}

inline void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open trace for write: " + path.string());
    out << kTraceHeader << "\n";
    for (const auto& r : rows) {
        out << r.episode << ',' << r.step << ',' << r.entity << ',' << kind_name(r.kind) << ','
            << format_double(r.x) << ',' << format_double(r.y) << ',' << format_double(r.vx) << ','
            << format_double(r.vy);
        for (double a : r.action) out << ',' << format_double(a);
        out << '\n';
    }
    if (!out) throw IoError("trace write failed: " + path.string());
}

inline EntityKind kind_from_name(const std::string& name) {
    if (name == "predator") return EntityKind::Predator;
    if (name == "prey") return EntityKind::Prey;
    if (name == "landmark") return EntityKind::Landmark;
    throw DecodeError("trace: unknown entity kind: " + name);
}

inline std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace for read: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) throw DecodeError("trace: bad header");

    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(ls, field, ',')) throw DecodeError("trace: short row");
            return field;
        };
        TraceRow r;
        r.episode = std::stoi(next());
        r.step = std::stoi(next());
        r.entity = std::stoi(next());
        r.kind = kind_from_name(next());
        r.x = std::stod(next());
        r.y = std::stod(next());
        r.vx = std::stod(next());
        r.vy = std::stod(next());
        for (double& a : r.action) a = std::stod(next());
        rows.push_back(r);
    }
    return rows;
}

}  // namespace igx
