#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "soundvi/solver.hpp"

namespace soundvi::detail {

/// Exact result when the initial state lies outside S?.
std::optional<SolveResult> shortcut(PreparedProblem const& problem, Method method);

/// Members in sweep order: by index, or by the Gauss-Seidel ordering.
std::vector<StateIndex> sweep_order(PreparedProblem const& problem, SolverConfig const& config,
                                    StateSet const& members);

/// Per-state starting bounds over the prepared model (infinite when unknown).
std::pair<std::vector<double>, std::vector<double>> initial_bounds(PreparedProblem const& problem,
                                                                   SolverConfig const& config);

}  // namespace soundvi::detail
