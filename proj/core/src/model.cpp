#include "soundvi/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "soundvi/errors.hpp"

namespace soundvi {

namespace {

std::string where(StateIndex s, std::size_t local_choice) {
    return "state " + std::to_string(s) + ", choice " + std::to_string(local_choice);
}

std::vector<Transition> canonical_row(std::vector<Transition> row, std::size_t num_states, StateIndex s,
                                      std::size_t local_choice) {
    for (auto const& t : row) {
        if (t.target >= num_states) {
            throw Error(ErrorCode::DanglingTarget,
                        where(s, local_choice) + " targets state " + std::to_string(t.target) + " but the model has " +
                            std::to_string(num_states) + " states");
        }
        if (!(t.probability >= 0.0) || !std::isfinite(t.probability)) {
            throw Error(ErrorCode::NegativeProbability,
                        where(s, local_choice) + " has probability " + std::to_string(t.probability));
        }
    }
    std::stable_sort(row.begin(), row.end(), [](auto const& a, auto const& b) { return a.target < b.target; });

    std::vector<Transition> merged;
    merged.reserve(row.size());
    for (auto const& t : row) {
        if (!merged.empty() && merged.back().target == t.target) {
            merged.back().probability += t.probability;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](auto const& t) { return t.probability == 0.0; });

    double sum = 0.0;
    for (auto const& t : merged) {
        sum += t.probability;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw Error(ErrorCode::RowSumError, where(s, local_choice) + " sums to " + std::to_string(sum));
    }
    // Rows within a few ulps of one are left alone so that validation is
    // idempotent; anything further off is rescaled.
    double const exactness = 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(merged.size());
    if (std::abs(sum - 1.0) > exactness) {
        for (auto& t : merged) {
            t.probability /= sum;
        }
    }
    return merged;
}

}  // namespace

StateSet const& SparseModel::label(std::string const& name) const {
    auto it = labels_.find(name);
    if (it == labels_.end()) {
        throw Error(ErrorCode::UnknownLabel, "no label named '" + name + "'");
    }
    return it->second;
}

RawModel SparseModel::to_raw() const {
    RawModel raw;
    raw.num_states = num_states();
    raw.initial_state = initial_state_;
    raw.labels = labels_;
    raw.row_groups.resize(num_states());
    for (StateIndex s = 0; s < num_states(); ++s) {
        for (auto c = first_choice(s); c < end_choice(s); ++c) {
            auto row = transitions(c);
            raw.row_groups[s].push_back(RawChoice{{row.begin(), row.end()}, rewards_[c], actions_[c]});
        }
    }
    return raw;
}

Partition Partition::from(StateSet goal, StateSet s0) {
    Partition p;
    p.maybe = (goal | s0).complement();
    p.goal = std::move(goal);
    p.s0 = std::move(s0);
    return p;
}

SparseModel validate_model(RawModel const& raw) {
    if (raw.row_groups.size() != raw.num_states) {
        throw Error(ErrorCode::EmptyRowGroup, "expected " + std::to_string(raw.num_states) + " row groups, got " +
                                                  std::to_string(raw.row_groups.size()));
    }
    if (raw.num_states == 0) {
        throw Error(ErrorCode::EmptyRowGroup, "model has no states");
    }
    if (raw.initial_state >= raw.num_states) {
        throw Error(ErrorCode::DanglingTarget, "initial state " + std::to_string(raw.initial_state) + " out of range");
    }

    SparseModel m;
    m.initial_state_ = raw.initial_state;
    m.row_group_start_.reserve(raw.num_states + 1);
    m.row_group_start_.push_back(0);
    m.choice_start_.push_back(0);
    for (StateIndex s = 0; s < raw.num_states; ++s) {
        auto const& group = raw.row_groups[s];
        if (group.empty()) {
            throw Error(ErrorCode::EmptyRowGroup, "state " + std::to_string(s) + " has no enabled choice");
        }
        for (std::size_t local = 0; local < group.size(); ++local) {
            auto row = canonical_row(group[local].transitions, raw.num_states, s, local);
            m.entries_.insert(m.entries_.end(), row.begin(), row.end());
            m.choice_start_.push_back(m.entries_.size());
            m.rewards_.push_back(group[local].reward);
            m.actions_.push_back(group[local].action);
        }
        m.row_group_start_.push_back(m.rewards_.size());
    }
    for (auto const& [name, states] : raw.labels) {
        if (states.size() != raw.num_states) {
            throw Error(ErrorCode::DanglingTarget, "label '" + name + "' covers " + std::to_string(states.size()) +
                                                       " states, model has " + std::to_string(raw.num_states));
        }
    }
    m.labels_ = raw.labels;
    return m;
}

SparseModel make_absorbing(SparseModel const& model, StateSet const& states) {
    if (states.empty()) {
        return model;
    }
    RawModel raw = model.to_raw();
    for (auto s : states.indices()) {
        raw.row_groups[s] = {RawChoice{{Transition{s, 1.0}}, 0.0, {}}};
    }
    return validate_model(raw);
}

SparseModel induce_mc(SparseModel const& model, Scheduler const& scheduler) {
    if (scheduler.choice_of.size() != model.num_states()) {
        throw Error(ErrorCode::InvalidChoiceIndex, "scheduler covers " + std::to_string(scheduler.choice_of.size()) +
                                                       " states, model has " + std::to_string(model.num_states()));
    }
    RawModel raw = model.to_raw();
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        auto local = scheduler.choice_of[s];
        if (local >= raw.row_groups[s].size()) {
            throw Error(ErrorCode::InvalidChoiceIndex,
                        "state " + std::to_string(s) + " has no choice " + std::to_string(local));
        }
        auto kept = std::move(raw.row_groups[s][local]);
        raw.row_groups[s] = {std::move(kept)};
    }
    return validate_model(raw);
}

std::string_view to_string(Direction direction) {
    return direction == Direction::Maximize ? "max" : "min";
}

std::string_view to_string(Objective objective) {
    return objective == Objective::Probability ? "prob" : "reward";
}

}  // namespace soundvi
