#pragma once

#include <span>
#include <vector>

#include "soundvi/model.hpp"

namespace soundvi {

/// One-step lookahead of a single choice: x is the (reward plus) expected
/// k-step goal value, y the probability of staying in S? one step further.
struct ChoiceScore {
    double x;
    double y;
};

/// Index of the optimal choice given the current bound (upper bound when
/// maximizing, lower bound when minimizing). A finite bound ranks choices
/// by x + y * bound. An infinite bound ranks by y (descending) with ties
/// broken by x (higher when maximizing, lower when minimizing). Remaining
/// ties go to the lowest index.
std::size_t select_choice(std::span<ChoiceScore const> scores, double bound, Direction direction);

/// Bound at which `chosen` stops being optimal. Maximizing: largest
/// (x_b - x_a) / (y_a - y_b) over b with y_a > y_b, or -inf. Minimizing:
/// smallest such ratio, or +inf.
double decision_value(std::span<ChoiceScore const> scores, std::size_t chosen, Direction direction);

/// Scores of every choice of state s on the given vectors. `rewards`
/// adds the choice reward to x (expected-reward mode).
std::vector<ChoiceScore> choice_scores(SparseModel const& model, std::span<double const> x, std::span<double const> y,
                                       StateIndex s, bool rewards);

struct BellmanStep {
    std::vector<double> values;
    /// Local choice index picked at every state (0 outside S?).
    Scheduler scheduler;
};

/// x'[s] = opt_a sum_t P(s,a,t) x[t] on S?, boundary states copied.
BellmanStep bellman_step_f(SparseModel const& model, Partition const& partition, std::span<double const> x,
                           Direction direction);

/// x'[s] = opt_a rho(s,a) + sum_t P(s,a,t) x[t] on S?, boundary states copied.
BellmanStep bellman_step_g(SparseModel const& model, Partition const& partition, std::span<double const> x,
                           Direction direction);

/// y'[s] = sum_t P(s,sigma(s),t) y[t] on S?, zero elsewhere.
std::vector<double> bellman_step_h(SparseModel const& model, Partition const& partition, std::span<double const> y,
                                   Scheduler const& scheduler);

/// Local choice index at s that select_choice() picks on (x, y).
std::size_t find_action(SparseModel const& model, std::span<double const> x, std::span<double const> y, StateIndex s,
                        double bound, Direction direction, bool rewards = false);

double decision_value(SparseModel const& model, std::span<double const> x, std::span<double const> y, StateIndex s,
                      std::size_t chosen, Direction direction, bool rewards = false);

}  // namespace soundvi
