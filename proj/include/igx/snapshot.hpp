// snapshot.hpp - exact world-state serialization for the archive's "go" step.
//
// Flat little-endian layout:
//   u32 version (1)
//   u32 entity count
//   u64 step index
//   u64[4] generator state
//   per entity: u32 kind, f64 x, y, vx, vy, radius, max_speed
#pragma once

#include "igx/common.hpp"
#include "igx/env.hpp"

namespace igx {

using StateSnapshot = std::vector<std::uint8_t>;

inline constexpr std::uint32_t kSnapshotVersion = 1;

inline StateSnapshot snapshot(const WorldState& state) {
    StateSnapshot out;
    out.reserve(4 + 4 + 8 + 32 + state.entities.size() * (4 + 6 * 8));
    put_u32(out, kSnapshotVersion);
    put_u32(out, static_cast<std::uint32_t>(state.entities.size()));
    put_u64(out, state.step_index);
    for (std::uint64_t w : state.rng.state()) put_u64(out, w);
    for (const auto& e : state.entities) {
        put_u32(out, static_cast<std::uint32_t>(e.kind));
        put_f64(out, e.position.x());
        put_f64(out, e.position.y());
        put_f64(out, e.velocity.x());
        put_f64(out, e.velocity.y());
        put_f64(out, e.radius);
        put_f64(out, e.max_speed);
    }
    return out;
}

inline WorldState restore(const StateSnapshot& snap) {
    ByteReader reader(snap);
    if (reader.read_u32() != kSnapshotVersion) throw DecodeError("snapshot: unsupported version");
    const std::uint32_t count = reader.read_u32();
    WorldState state;
    state.step_index = reader.read_u64();
    std::array<std::uint64_t, 4> rng_state;
    for (auto& w : rng_state) w = reader.read_u64();
    state.rng.set_state(rng_state);
    state.entities.resize(count);
    for (auto& e : state.entities) {
        const std::uint32_t kind = reader.read_u32();
        if (kind > 2) throw DecodeError("snapshot: bad entity kind");
        e.kind = static_cast<EntityKind>(kind);
        e.position.x() = reader.read_f64();
        e.position.y() = reader.read_f64();
        e.velocity.x() = reader.read_f64();
        e.velocity.y() = reader.read_f64();
        e.radius = reader.read_f64();
        e.max_speed = reader.read_f64();
    }
    if (!reader.exhausted()) throw DecodeError("snapshot: trailing bytes");
    return state;
}

}  // namespace igx
