// maddpg.hpp - centralized-training decentralized-execution learners.
//
// Each agent owns a softmax actor over its private observation and a critic
// over the joint observation/action vector, plus target copies of both.
// Actions live on the 5-simplex so the critic stays differentiable through
// the action slot.
#pragma once

#include "igx/common.hpp"
#include "igx/env.hpp"
#include "igx/network.hpp"
#include "igx/optimizer.hpp"
#include "igx/replay_buffer.hpp"

#include <vector>

namespace igx {

struct TrainConfig {
    double gamma = 0.95;
    double tau = 0.01;
    int target_period = 10;        // env steps between target syncs
    int batch_size = 1024;
    std::size_t buffer_capacity = 1'000'000;
    int warmup = 1024;             // transitions before learning starts
    int update_every = 4;          // env steps between learner update rounds
    double actor_lr = 1e-2;
    double critic_lr = 1.5e-2;     // critic tracks slightly faster than the actor
    double noise_start = 1.0;
    double noise_end = 0.05;
    double noise_decay_fraction = 0.5;  // fraction of episodes spent decaying

    double noise_scale(int episode, int total_episodes) const {
        const double decay_span = noise_decay_fraction * total_episodes;
        if (decay_span <= 0.0 || episode >= decay_span) return noise_end;
        return noise_start + (noise_end - noise_start) * (episode / decay_span);
    }
};

inline void validate(const TrainConfig& c) {
    if (c.gamma < 0.0 || c.gamma >= 1.0) throw ConfigError("train: gamma must be in [0,1)");
    if (c.target_period < 1) throw ConfigError("train: target_period must be >= 1");
    if (c.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (c.update_every < 1) throw ConfigError("train: update_every must be >= 1");
    if (c.warmup < 1) throw ConfigError("train: warmup must be >= 1");
    if (c.tau < 0.0 || c.tau > 1.0) throw ConfigError("train: tau must be in [0,1]");
}

struct AgentLearner {
    NetworkParams actor;          // obs_dim -> 5, softmax output
    NetworkParams critic;         // all obs + all actions -> 1
    NetworkParams target_actor;
    NetworkParams target_critic;
    OptimizerState actor_opt;
    OptimizerState critic_opt;
    int agent_index = 0;
    EntityKind group = EntityKind::Predator;
    int obs_dim = 0;
};

inline constexpr int kActionDim = 5;

inline int critic_input_dim(const std::vector<int>& obs_dims) {
    int total = 0;
    for (int d : obs_dims) total += d;
    return total + kActionDim * static_cast<int>(obs_dims.size());
}

inline AgentLearner make_learner(int agent_index, EntityKind group, const std::vector<int>& obs_dims,
                                 const TrainConfig& config, std::uint64_t seed,
                                 const std::vector<int>& hidden = {64, 64}) {
    AgentLearner learner;
    learner.agent_index = agent_index;
    learner.group = group;
    learner.obs_dim = obs_dims.at(agent_index);

    std::vector<int> actor_sizes{learner.obs_dim};
    actor_sizes.insert(actor_sizes.end(), hidden.begin(), hidden.end());
    actor_sizes.push_back(kActionDim);
    std::vector<int> critic_sizes{critic_input_dim(obs_dims)};
    critic_sizes.insert(critic_sizes.end(), hidden.begin(), hidden.end());
    critic_sizes.push_back(1);

    Rng seeds = make_stream(seed, 1000 + static_cast<std::uint64_t>(agent_index));
    learner.actor = init_network(actor_sizes, Activation::SoftmaxOut, seeds.next());
    learner.critic = init_network(critic_sizes, Activation::Identity, seeds.next());
    learner.target_actor = learner.actor;
    learner.target_critic = learner.critic;
    learner.actor_opt = make_optimizer(learner.actor, config.actor_lr);
    learner.critic_opt = make_optimizer(learner.critic, config.critic_lr);
    return learner;
}

// Actor logits perturbed by Gaussian noise, then squashed onto the simplex.
// noise_scale 0 draws nothing and is fully deterministic.
inline ActionVec act(const AgentLearner& learner, const Vec& obs, double noise_scale, Rng& rng) {
    ForwardTape tape;
    forward(learner.actor, obs, &tape);
    Vec logits = tape.logits().col(0);
    if (noise_scale > 0.0)
        for (Eigen::Index i = 0; i < logits.size(); ++i) logits(i) += noise_scale * rng.normal();
    return softmax(logits);
}

namespace detail {

inline Mat gather_obs(const Batch& batch, int agent, bool next) {
    const Vec& first = next ? batch.front()->next_obs[agent] : batch.front()->obs[agent];
    Mat out(first.size(), batch.size());
    for (std::size_t k = 0; k < batch.size(); ++k)
        out.col(static_cast<Eigen::Index>(k)) = next ? batch[k]->next_obs[agent] : batch[k]->obs[agent];
    return out;
}

inline Mat gather_actions(const Batch& batch, int n_agents) {
    Mat out(kActionDim * n_agents, batch.size());
    for (std::size_t k = 0; k < batch.size(); ++k)
        for (int a = 0; a < n_agents; ++a)
            out.block(kActionDim * a, static_cast<Eigen::Index>(k), kActionDim, 1) = batch[k]->actions[a];
    return out;
}

// Joint critic input [obs_0; ...; obs_{n-1}; act_0; ...; act_{n-1}].
inline Mat critic_input(const std::vector<Mat>& obs, const Mat& actions) {
    Eigen::Index obs_rows = 0;
    for (const auto& o : obs) obs_rows += o.rows();
    Mat x(obs_rows + actions.rows(), actions.cols());
    Eigen::Index row = 0;
    for (const auto& o : obs) {
        x.middleRows(row, o.rows()) = o;
        row += o.rows();
    }
    x.middleRows(row, actions.rows()) = actions;
    return x;
}

}  // namespace detail

// Bellman residual loss on one sampled batch, one optimizer step on the
// critic; the target is r + gamma * Q'(o', target-policy actions), with the
// bootstrap dropped on done transitions.  Returns the pre-step loss.
inline double critic_update(AgentLearner& learner, const Batch& batch,
                            const std::vector<AgentLearner>& all, const TrainConfig& config) {
    if (batch.empty()) throw std::invalid_argument("critic_update: empty batch");
    const int n_agents = static_cast<int>(all.size());
    const Eigen::Index B = static_cast<Eigen::Index>(batch.size());

    std::vector<Mat> next_obs(n_agents);
    Mat next_actions(kActionDim * n_agents, B);
    for (int a = 0; a < n_agents; ++a) {
        next_obs[a] = detail::gather_obs(batch, a, /*next=*/true);
        next_actions.middleRows(kActionDim * a, kActionDim) = forward(all[a].target_actor, next_obs[a]);
    }
    const Mat q_next = forward(learner.target_critic, detail::critic_input(next_obs, next_actions));

    Vec y(B);
    for (Eigen::Index k = 0; k < B; ++k) {
        const Transition& t = *batch[static_cast<std::size_t>(k)];
        const double r = t.rewards(learner.agent_index);
        y(k) = t.done ? r : r + config.gamma * q_next(0, k);
    }

    std::vector<Mat> obs(n_agents);
    for (int a = 0; a < n_agents; ++a) obs[a] = detail::gather_obs(batch, a, /*next=*/false);
    ForwardTape tape;
    const Mat q = forward(learner.critic, detail::critic_input(obs, detail::gather_actions(batch, n_agents)), &tape);

    const Vec residual = q.row(0).transpose() - y;
    const double loss = residual.squaredNorm() / static_cast<double>(B);
    if (!std::isfinite(loss)) throw DivergenceError("critic_update: non-finite loss");

    Mat dq(1, B);
    dq.row(0) = (2.0 / static_cast<double>(B)) * residual.transpose();
    Gradients grads;
    backward(learner.critic, tape, dq, &grads);
    optimizer_step(learner.critic_opt, learner.critic, grads);
    return loss;
}

// d(mean Q)/d(actor params) with the agent's own current-policy action
// substituted into the critic input; other agents' actions come from the
// batch.  Exposed separately so tests can difference it.
inline double actor_gradient(const AgentLearner& learner, const Batch& batch,
                             const std::vector<AgentLearner>& all, Gradients* grads) {
    if (batch.empty()) throw std::invalid_argument("actor_update: empty batch");
    const int n_agents = static_cast<int>(all.size());
    const Eigen::Index B = static_cast<Eigen::Index>(batch.size());

    std::vector<Mat> obs(n_agents);
    for (int a = 0; a < n_agents; ++a) obs[a] = detail::gather_obs(batch, a, /*next=*/false);

    ForwardTape actor_tape;
    const Mat own_actions = forward(learner.actor, obs[learner.agent_index], &actor_tape);
    Mat actions = detail::gather_actions(batch, n_agents);
    actions.middleRows(kActionDim * learner.agent_index, kActionDim) = own_actions;

    ForwardTape critic_tape;
    const Mat q = forward(learner.critic, detail::critic_input(obs, actions), &critic_tape);
    const double objective = q.mean();
    if (!std::isfinite(objective)) throw DivergenceError("actor_update: non-finite objective");

    const Mat dq = Mat::Constant(1, B, 1.0 / static_cast<double>(B));
    const Mat dx = backward(learner.critic, critic_tape, dq, nullptr);

    Eigen::Index action_row = 0;
    for (int a = 0; a < n_agents; ++a) action_row += obs[a].rows();
    const Mat d_own = dx.middleRows(action_row + kActionDim * learner.agent_index, kActionDim);

    if (grads) backward(learner.actor, actor_tape, d_own, grads);
    return objective;
}

// One gradient-ascent step on mean Q; returns the pre-step objective.
inline double actor_update(AgentLearner& learner, const Batch& batch,
                           const std::vector<AgentLearner>& all, const TrainConfig& config) {
    (void)config;
    Gradients grads;
    const double objective = actor_gradient(learner, batch, all, &grads);
    for (auto& w : grads.weight) w = -w;
    for (auto& b : grads.bias) b = -b;
    optimizer_step(learner.actor_opt, learner.actor, grads);
    return objective;
}

// Soft-updates every learner's target nets when the step counter hits the
// configured period.
inline void sync_targets(std::vector<AgentLearner>& learners, const TrainConfig& config,
                         std::uint64_t global_step) {
    if (global_step == 0 || global_step % static_cast<std::uint64_t>(config.target_period) != 0) return;
    for (auto& learner : learners) {
        soft_update(learner.target_actor, learner.actor, config.tau);
        soft_update(learner.target_critic, learner.critic, config.tau);
    }
}

}  // namespace igx
