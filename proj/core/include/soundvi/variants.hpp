#pragma once

#include <span>
#include <vector>

#include "soundvi/model.hpp"
#include "soundvi/solver.hpp"

namespace soundvi {

/// Total order on states used by Gauss-Seidel sweeps.
class StateOrdering {
   public:
    /// Throws Error(InvalidConfig) unless `order` is a permutation of 0..n-1.
    explicit StateOrdering(std::vector<StateIndex> order);

    std::vector<StateIndex> const& order() const noexcept { return order_; }
    std::size_t position(StateIndex s) const { return position_[s]; }
    bool precedes(StateIndex a, StateIndex b) const { return position_[a] < position_[b]; }
    std::size_t size() const noexcept { return order_.size(); }

   private:
    std::vector<StateIndex> order_;
    std::vector<std::size_t> position_;
};

/// SCCs successors-first, states inside an SCC by index.
StateOrdering default_ordering(SparseModel const& model);

struct SweepResult {
    std::vector<double> x;
    std::vector<double> y;
    Scheduler scheduler;
    /// Largest (maximize) or smallest (minimize) decision value met.
    double decision;
};

/// One in-place sweep over S? in `ordering`, updating x and y together.
/// The choice at each state is made on the partially updated vectors
/// against `bound`.
SweepResult gs_sweep(SparseModel const& model, Partition const& partition, std::span<double const> x,
                     std::span<double const> y, StateOrdering const& ordering, Direction direction, double bound,
                     bool rewards = false);

/// Solves SCC by SCC, successors first, on the states reachable from the
/// initial state. Each SCC receives certified lower and upper values of its
/// exits; SVI and II run once against each, VI once against the lower values.
SolveResult topological_solve(PreparedProblem const& problem, SolverConfig const& config);

}  // namespace soundvi
