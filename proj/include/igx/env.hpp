// env.hpp - deterministic 2-D predator-prey particle world.
//
// Entities are stored in a fixed order: predators, then prey, then landmarks.
// Agents (predators + prey) act; landmarks never move.  All randomness flows
// through the explicit generator carried inside WorldState, so equal states
// produce bit-identical successors.
#pragma once

#include "igx/common.hpp"

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace igx {

enum class EntityKind { Predator, Prey, Landmark };

inline const char* kind_name(EntityKind k) {
    switch (k) {
        case EntityKind::Predator: return "predator";
        case EntityKind::Prey: return "prey";
        case EntityKind::Landmark: return "landmark";
    }
    throw std::invalid_argument("unknown entity kind");
}

struct EntityState {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
    double radius = 0.0;
    double max_speed = 0.0;  // ignored for landmarks
    EntityKind kind = EntityKind::Landmark;
};

struct WorldState {
    std::vector<EntityState> entities;  // predators, prey, landmarks
    std::uint64_t step_index = 0;
    Rng rng;
};

struct EnvConfig {
    double dt = 0.1;
    double damping = 0.25;
    double force_gain = 3.0;
    double contact_stiffness = 30.0;  // landmark overlap spring
    double mass = 1.0;
    double observation_radius = 0.5;
    double border = 1.0;
    double predator_radius = 0.075;
    double prey_radius = 0.05;
    double landmark_radius = 0.2;
    double predator_max_speed = 1.0;
    double prey_max_speed = 1.3;  // prey outruns predators
    int n_predators = 3;
    int n_prey = 1;
    int n_landmarks = 2;
    int episode_length = 100;

    int n_agents() const { return n_predators + n_prey; }
    int n_entities() const { return n_predators + n_prey + n_landmarks; }
};

inline void validate(const EnvConfig& c) {
    if (c.dt <= 0.0) throw ConfigError("env: dt must be positive");
    if (c.damping < 0.0 || c.damping >= 1.0) throw ConfigError("env: damping must be in [0,1)");
    if (c.observation_radius <= 0.0) throw ConfigError("env: observation_radius must be positive");
    if (c.n_predators < 1 || c.n_prey < 1) throw ConfigError("env: need at least one predator and one prey");
    if (c.n_landmarks < 0) throw ConfigError("env: landmark count cannot be negative");
    if (c.episode_length < 0) throw ConfigError("env: episode_length cannot be negative");
}

// One agent's action: non-negative weights over {no-op, +x, -x, +y, -y}
// summing to one (a relaxed categorical).
using ActionVec = Eigen::Matrix<double, 5, 1>;

struct JointAction {
    std::vector<ActionVec> per_agent;
};

inline ActionVec one_hot_action(int direction) {
    ActionVec a = ActionVec::Zero();
    a(direction) = 1.0;
    return a;
}

inline bool on_simplex(const ActionVec& a, double tol = 1e-6) {
    return a.minCoeff() >= 0.0 && std::abs(a.sum() - 1.0) <= tol;
}

// Pairwise predator/prey reward h, the base signal delta, and the event
// payouts.  The default h pays catch_reward when the pair overlaps.
struct RewardSpec {
    std::function<double(const EntityState&, const EntityState&)> pair_reward;
    double base_delta = 0.0;
    double catch_reward = 10.0;
    double border_penalty = -10.0;

    static RewardSpec defaults() {
        RewardSpec spec;
        const double catch_reward = spec.catch_reward;
        spec.pair_reward = [catch_reward](const EntityState& predator, const EntityState& prey) {
            const double dist = (predator.position - prey.position).norm();
            return dist < predator.radius + prey.radius ? catch_reward : 0.0;
        };
        return spec;
    }
};

struct StepEvents {
    std::vector<std::pair<int, int>> catches;  // (predator agent index, prey agent index)
    std::vector<int> border_violations;        // agent indices outside the border
};

// Shared relative term R = sum over predator x prey pairs of h; every
// predator earns R + delta, every prey earns -R - delta, and each prey
// outside the border additionally collects border_penalty once per step.
inline Vec compute_external_rewards(const EnvConfig& config, const WorldState& state,
                                    const RewardSpec& spec, StepEvents* events = nullptr) {
    const int P = config.n_predators;
    const int Q = config.n_prey;
    double relative = 0.0;
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < Q; ++j) {
            const EntityState& predator = state.entities[i];
            const EntityState& prey = state.entities[P + j];
            relative += spec.pair_reward(predator, prey);
            if (events) {
                const double dist = (predator.position - prey.position).norm();
                if (dist < predator.radius + prey.radius) events->catches.emplace_back(i, P + j);
            }
        }
    }

    Vec rewards(config.n_agents());
    for (int i = 0; i < P; ++i) rewards(i) = relative + spec.base_delta;
    for (int j = 0; j < Q; ++j) {
        double r = -relative - spec.base_delta;
        const EntityState& prey = state.entities[P + j];
        const bool outside = std::abs(prey.position.x()) > config.border ||
                             std::abs(prey.position.y()) > config.border;
        if (outside) r += spec.border_penalty;
        rewards(P + j) = r;
    }

    if (events) {
        for (int a = 0; a < config.n_agents(); ++a) {
            const auto& p = state.entities[a].position;
            if (std::abs(p.x()) > config.border || std::abs(p.y()) > config.border)
                events->border_violations.push_back(a);
        }
    }
    return rewards;
}

inline Vec compute_external_rewards(const EnvConfig& config, const WorldState& state,
                                    const RewardSpec& spec, StepEvents& events) {
    return compute_external_rewards(config, state, spec, &events);
}

// Movable entities placed uniformly inside the border with zero velocity;
// landmarks placed uniformly.  Same seed, same state.
inline WorldState reset(const EnvConfig& config, std::uint64_t seed) {
    validate(config);
    WorldState state;
    state.rng = Rng(seed);
    state.entities.reserve(config.n_entities());

    auto place = [&](EntityKind kind, double radius, double max_speed) {
        EntityState e;
        e.kind = kind;
        e.radius = radius;
        e.max_speed = max_speed;
        e.position.x() = state.rng.uniform(-config.border, config.border);
        e.position.y() = state.rng.uniform(-config.border, config.border);
        state.entities.push_back(e);
    };

    for (int i = 0; i < config.n_predators; ++i)
        place(EntityKind::Predator, config.predator_radius, config.predator_max_speed);
    for (int i = 0; i < config.n_prey; ++i)
        place(EntityKind::Prey, config.prey_radius, config.prey_max_speed);
    for (int i = 0; i < config.n_landmarks; ++i) place(EntityKind::Landmark, config.landmark_radius, 0.0);
    return state;
}

struct StepResult {
    WorldState state;
    Vec rewards;  // per agent, external
    StepEvents events;
};

// Control force (a1-a2, a3-a4) * gain plus a linear spring pushing movable
// entities out of landmark overlap; velocity is damped, accelerated, and
// clipped to max_speed; rewards are computed on the successor state.
inline StepResult step(const EnvConfig& config, const WorldState& state, const JointAction& actions,
                       const RewardSpec& spec) {
    const int n_agents = config.n_agents();
    if (static_cast<int>(actions.per_agent.size()) != n_agents)
        throw std::invalid_argument("step: expected " + std::to_string(n_agents) + " action vectors, got " +
                                    std::to_string(actions.per_agent.size()));

    StepResult result;
    result.state = state;
    auto& entities = result.state.entities;

    for (int a = 0; a < n_agents; ++a) {
        const ActionVec& act = actions.per_agent[a];
        Eigen::Vector2d force(config.force_gain * (act(1) - act(2)),
                              config.force_gain * (act(3) - act(4)));

        for (int l = config.n_agents(); l < config.n_entities(); ++l) {
            const EntityState& landmark = state.entities[l];
            const Eigen::Vector2d delta = state.entities[a].position - landmark.position;
            const double dist = delta.norm();
            const double overlap = state.entities[a].radius + landmark.radius - dist;
            if (overlap > 0.0 && dist > 1e-12)
                force += config.contact_stiffness * overlap * (delta / dist);
        }

        EntityState& e = entities[a];
        e.velocity = e.velocity * (1.0 - config.damping) + (force / config.mass) * config.dt;
        const double speed = e.velocity.norm();
        if (speed > e.max_speed) e.velocity *= e.max_speed / speed;
        e.position += e.velocity * config.dt;
    }

    result.state.step_index = state.step_index + 1;
    result.rewards = compute_external_rewards(config, result.state, spec, result.events);
    return result;
}

// Observation layout (fixed, network-ready):
//   [0..3]                self position (2), self velocity (2)
//   then for every other entity in world order, a 5-scalar block:
//   [visible flag, relative position (2), relative velocity (2)]
// An entity is visible iff its distance from the observer is at most the
// observation radius (closed ball); masked blocks are exactly zero except
// that the flag is 0.
inline int observation_dim(const EnvConfig& config) { return 4 + 5 * (config.n_entities() - 1); }

inline Vec observe(const EnvConfig& config, const WorldState& state, int agent_index) {
    if (agent_index < 0 || agent_index >= config.n_agents())
        throw std::out_of_range("observe: agent index " + std::to_string(agent_index) + " out of range");

    const EntityState& self = state.entities[agent_index];
    Vec obs = Vec::Zero(observation_dim(config));
    obs(0) = self.position.x();
    obs(1) = self.position.y();
    obs(2) = self.velocity.x();
    obs(3) = self.velocity.y();

    int offset = 4;
    for (int e = 0; e < config.n_entities(); ++e) {
        if (e == agent_index) continue;
        const EntityState& other = state.entities[e];
        const double dist = (other.position - self.position).norm();
        if (dist <= config.observation_radius) {
            obs(offset) = 1.0;
            obs(offset + 1) = other.position.x() - self.position.x();
            obs(offset + 2) = other.position.y() - self.position.y();
            obs(offset + 3) = other.velocity.x() - self.velocity.x();
            obs(offset + 4) = other.velocity.y() - self.velocity.y();
        }
        offset += 5;
    }
    return obs;
}

inline bool bits_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

inline bool bits_equal(const WorldState& a, const WorldState& b) {
    if (a.entities.size() != b.entities.size() || a.step_index != b.step_index) return false;
    if (!(a.rng == b.rng)) return false;
    for (std::size_t i = 0; i < a.entities.size(); ++i) {
        const auto& x = a.entities[i];
        const auto& y = b.entities[i];
        if (x.kind != y.kind) return false;
        for (int d = 0; d < 2; ++d) {
            if (!bits_equal(x.position(d), y.position(d))) return false;
            if (!bits_equal(x.velocity(d), y.velocity(d))) return false;
        }
        if (!bits_equal(x.radius, y.radius) || !bits_equal(x.max_speed, y.max_speed)) return false;
    }
    return true;
}

}  // namespace igx
