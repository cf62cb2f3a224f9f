#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "soundvi/model.hpp"

namespace soundvi {

enum class Method { VI, II, SVI };

std::string_view to_string(Method method);
/// Accepts "vi", "ii", "svi"; throws Error(InvalidConfig) otherwise.
Method parse_method(std::string_view text);

enum class SolveStatus { Converged, IterationLimit };

/// Per-iteration view handed to SolverConfig::observer.
///
/// SVI fills every field; x, y and scheduler range over the states of the
/// prepared model. II reports the lower and upper iterate at the initial
/// state; VI reports its single iterate as both bounds. Fields that do not
/// apply are NaN or empty.
struct IterationSnapshot {
    std::uint64_t k = 0;
    double lower = 0.0;
    double upper = 0.0;
    double decision = 0.0;
    double y_initial = 0.0;
    std::vector<double> x;
    std::vector<double> y;
    Scheduler scheduler;
};

struct SolverConfig {
    Method method = Method::SVI;
    Direction direction = Direction::Maximize;
    Objective objective = Objective::Probability;
    double epsilon = 1e-6;
    bool gauss_seidel = false;
    bool topological = false;
    /// Scalar bounds on every state's value.
    std::optional<double> lower;
    std::optional<double> upper;
    /// Per-state bounds (indexed by the input model's states), II only.
    std::optional<std::vector<double>> lower_bounds;
    std::optional<std::vector<double>> upper_bounds;
    /// Gauss-Seidel sweep order over the input model's states.
    std::optional<std::vector<StateIndex>> ordering;
    std::uint64_t max_iterations = 50'000'000;
    std::function<void(IterationSnapshot const&)> observer;
};

/// Throws Error(InvalidConfig) for epsilon <= 0, lower > upper or badly
/// sized bound vectors.
void validate_config(SolverConfig const& config, std::size_t num_states);

struct SolveResult {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t iterations = 0;
    double time_ms = 0.0;
    Method method = Method::SVI;
    bool sound = true;
    SolveStatus status = SolveStatus::Converged;
};

/// Query-specific working model: goal states absorbing, S0 computed and,
/// for maximal probabilities on non-contracting models, MECs of S? collapsed.
struct PreparedProblem {
    SparseModel model;
    Partition partition;
    Objective objective = Objective::Probability;
    Direction direction = Direction::Maximize;
    /// Prepared state for every input state.
    std::vector<StateIndex> state_map;
    std::size_t collapsed_components = 0;

    StateIndex initial_state() const { return model.initial_state(); }
};

/// Throws NotContracting (minimal probabilities), RewardOnMec (rewards) or
/// InvalidConfig (goal set of the wrong size).
PreparedProblem prepare(SparseModel const& model, StateSet const& goal, Objective objective, Direction direction);

/// Fixed values of goal and S0 states: 1 on goal for probabilities, 0 elsewhere.
std::vector<double> boundary_values(PreparedProblem const& problem);

SolveResult svi_solve(PreparedProblem const& problem, SolverConfig const& config);
SolveResult vi_solve(PreparedProblem const& problem, SolverConfig const& config);
/// Throws MissingRewardBounds for reward queries without bounds.
SolveResult ii_solve(PreparedProblem const& problem, SolverConfig const& config);

/// Prepares the query, dispatches on method and variant flags and times
/// the whole call.
SolveResult solve(SparseModel const& model, StateSet const& goal, SolverConfig const& config);

}  // namespace soundvi
