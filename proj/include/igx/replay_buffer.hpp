// replay_buffer.hpp - ring storage of joint transitions, uniform sampling
// with replacement.
#pragma once

#include "igx/common.hpp"
#include "igx/env.hpp"

#include <vector>

namespace igx {

struct Transition {
    std::vector<Vec> obs;        // per agent
    std::vector<ActionVec> actions;
    Vec rewards;                 // per agent, total (external + intrinsic)
    std::vector<Vec> next_obs;
    bool done = false;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw ConfigError("replay buffer capacity must be positive");
    }

    // Appends until full, then overwrites the oldest entry.
    void push(Transition t) {
        const std::size_t n = t.obs.size();
        if (t.actions.size() != n || t.next_obs.size() != n ||
            static_cast<std::size_t>(t.rewards.size()) != n)
            throw std::invalid_argument("replay push: transition arity mismatch");
        if (storage_.size() < capacity_) {
            storage_.push_back(std::move(t));
        } else {
            storage_[cursor_] = std::move(t);
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    std::vector<const Transition*> sample(std::size_t batch_size, Rng& rng) const {
        if (storage_.empty()) throw EmptyError("replay sample: buffer is empty");
        if (batch_size == 0) throw std::invalid_argument("replay sample: batch size must be >= 1");
        std::vector<const Transition*> batch(batch_size);
        for (auto& slot : batch) slot = &storage_[rng.below(storage_.size())];
        return batch;
    }

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return storage_.at(i); }

private:
    std::vector<Transition> storage_;
    std::size_t capacity_;
    std::size_t cursor_ = 0;
};

using Batch = std::vector<const Transition*>;

}  // namespace igx
