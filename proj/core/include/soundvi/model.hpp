#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "soundvi/state_set.hpp"

namespace soundvi {

using ChoiceIndex = std::size_t;

enum class Direction { Maximize, Minimize };
enum class Objective { Probability, Reward };

struct Transition {
    StateIndex target;
    double probability;

    friend bool operator==(Transition const&, Transition const&) = default;
};

using LabelMap = std::map<std::string, StateSet>;

/// Unvalidated model data as produced by the parsers or built by hand.
struct RawChoice {
    std::vector<Transition> transitions;
    double reward = 0.0;
    std::string action;
};

struct RawModel {
    std::size_t num_states = 0;
    StateIndex initial_state = 0;
    /// One entry per state; each holds that state's enabled choices.
    std::vector<std::vector<RawChoice>> row_groups;
    LabelMap labels;
};

/// Row-grouped sparse transition structure of an MC or MDP.
///
/// Choices of state s occupy the global choice indices
/// [first_choice(s), first_choice(s) + num_choices(s)). Entries of every
/// choice are sorted by target, free of duplicates and sum to one.
/// Instances are immutable; obtain them through validate_model().
class SparseModel {
   public:
    SparseModel() = default;

    std::size_t num_states() const noexcept { return row_group_start_.empty() ? 0 : row_group_start_.size() - 1; }
    std::size_t num_choices() const noexcept { return rewards_.size(); }
    std::size_t num_transitions() const noexcept { return entries_.size(); }
    StateIndex initial_state() const noexcept { return initial_state_; }

    ChoiceIndex first_choice(StateIndex s) const { return row_group_start_[s]; }
    ChoiceIndex end_choice(StateIndex s) const { return row_group_start_[s + 1]; }
    std::size_t num_choices(StateIndex s) const { return row_group_start_[s + 1] - row_group_start_[s]; }

    std::span<Transition const> transitions(ChoiceIndex c) const {
        return {entries_.data() + choice_start_[c], entries_.data() + choice_start_[c + 1]};
    }
    double reward(ChoiceIndex c) const { return rewards_[c]; }
    std::string const& action(ChoiceIndex c) const { return actions_[c]; }

    /// True iff every state has exactly one choice.
    bool is_mc() const noexcept { return num_choices() == num_states(); }

    LabelMap const& labels() const noexcept { return labels_; }
    bool has_label(std::string const& name) const { return labels_.count(name) != 0; }
    /// Throws Error(UnknownLabel) if absent.
    StateSet const& label(std::string const& name) const;

    /// Back to editable form; validate_model(m.to_raw()) == m.
    RawModel to_raw() const;

    friend bool operator==(SparseModel const&, SparseModel const&) = default;

   private:
    friend SparseModel validate_model(RawModel const& raw);

    std::vector<ChoiceIndex> row_group_start_;
    std::vector<std::size_t> choice_start_;
    std::vector<Transition> entries_;
    std::vector<double> rewards_;
    std::vector<std::string> actions_;
    LabelMap labels_;
    StateIndex initial_state_ = 0;
};

/// Disjoint cover S = S0 ∪ G ∪ S? of the state space.
struct Partition {
    StateSet s0;
    StateSet goal;
    StateSet maybe;

    /// maybe = complement of (goal ∪ s0). The two arguments must be disjoint.
    static Partition from(StateSet goal, StateSet s0);

    std::size_t num_states() const { return goal.size(); }
};

/// Positional scheduler: local choice index per state.
struct Scheduler {
    std::vector<std::size_t> choice_of;

    friend bool operator==(Scheduler const&, Scheduler const&) = default;
};

/// Largest tolerated |row sum - 1| before a choice is rejected.
inline constexpr double kRowSumTolerance = 1e-6;

/// Canonicalizes and checks raw model data: entries sorted by target,
/// duplicate targets merged, zero-probability entries dropped and every row
/// renormalized by its actual sum.
///
/// Throws Error with RowSumError, DanglingTarget, EmptyRowGroup or
/// NegativeProbability.
SparseModel validate_model(RawModel const& raw);

/// Replaces the row group of each listed state by a single reward-free
/// self-loop.
SparseModel make_absorbing(SparseModel const& model, StateSet const& states);

/// MC that keeps exactly the scheduled choice per state.
SparseModel induce_mc(SparseModel const& model, Scheduler const& scheduler);

std::string_view to_string(Direction direction);
std::string_view to_string(Objective objective);

}  // namespace soundvi
