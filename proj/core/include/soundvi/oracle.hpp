#pragma once

#include <vector>

#include "soundvi/model.hpp"

namespace soundvi {

inline constexpr std::size_t kOracleMaxStates = 12;
inline constexpr std::size_t kOracleMaxSchedulers = 4096;

/// Brute-force reference values for small models: every positional
/// scheduler (over non-goal states) is enumerated, its induced chain solved
/// by dense elimination, and the per-state optimum taken. Goal states count
/// as absorbing. Throws TooLargeForOracle beyond the size limits and
/// NotContracting for rewards when some scheduler misses the goal.
std::vector<double> oracle_solve(SparseModel const& model, StateSet const& goal, Objective objective,
                                 Direction direction);

/// True iff every positional scheduler reaches the goal almost surely from
/// every state. Same size limits as oracle_solve().
bool oracle_contracting(SparseModel const& model, StateSet const& goal);

}  // namespace soundvi
