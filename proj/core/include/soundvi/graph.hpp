#pragma once

#include <optional>
#include <vector>

#include "soundvi/model.hpp"

namespace soundvi {

/// States from which no scheduler reaches goal with positive probability.
StateSet prob0_max(SparseModel const& model, StateSet const& goal);

/// States from which some scheduler avoids goal forever (greatest fixpoint
/// of "has a choice whose successors all stay in the set").
StateSet prob0_min(SparseModel const& model, StateSet const& goal);

struct EndComponent {
    std::vector<StateIndex> states;
    /// choices[i] are the global choice indices retained at states[i].
    std::vector<std::vector<ChoiceIndex>> choices;
};

struct MecDecomposition {
    std::vector<EndComponent> components;
    /// Component index per state, or nullopt outside every MEC.
    std::vector<std::optional<std::size_t>> component_of;

    bool empty() const { return components.empty(); }
};

/// Maximal end components of the sub-MDP on `restrict` (choices with a
/// successor outside `restrict` are dropped). Iterated SCC refinement.
MecDecomposition mec_decompose(SparseModel const& model, StateSet const& restrict);

struct QuotientMap {
    SparseModel model;
    /// Quotient state for every original state.
    std::vector<StateIndex> state_map;
    /// Partition of the quotient model induced by the original one.
    Partition partition;
    std::size_t collapsed_components = 0;
};

/// Replaces every MEC inside partition.maybe by one fresh state whose
/// choices are the member choices that can leave the MEC. Preserves maximal
/// reachability probabilities. Throws Error(MecContainsGoal) if a MEC
/// intersects the goal set.
QuotientMap collapse_end_components(SparseModel const& model, Partition const& partition);

/// True iff every scheduler reaches `target` with probability one from
/// every state, i.e. no end component avoids `target`.
bool check_contracting(SparseModel const& model, StateSet const& target);

struct SccOrder {
    /// Strongly connected components, successors before predecessors.
    std::vector<std::vector<StateIndex>> components;
    std::vector<std::size_t> component_of;
};

/// Tarjan decomposition over all choices of the model.
SccOrder scc_order(SparseModel const& model);

/// States reachable from `from` (inclusive) under some scheduler.
StateSet reachable_states(SparseModel const& model, StateIndex from);

}  // namespace soundvi
