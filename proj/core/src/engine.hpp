#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "soundvi/bellman.hpp"
#include "soundvi/model.hpp"

namespace soundvi::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sub-system over a subset of states (`states`, in sweep order). Every
/// transition leaving the subset is folded into the choice constant.
struct ReducedSystem {
    struct Entry {
        std::size_t target;
        double probability;
    };

    std::vector<StateIndex> states;
    std::vector<std::size_t> group_start;
    std::vector<std::size_t> entry_start;
    std::vector<Entry> entries;
    std::vector<double> constant;
    /// Choice index local to its state in the source model.
    std::vector<std::size_t> local_choice;

    std::size_t size() const { return states.size(); }
};

/// `exit_value` ranges over all model states; only entries outside
/// `members` are read.
ReducedSystem reduce(SparseModel const& model, std::span<StateIndex const> members, bool rewards,
                     std::span<double const> exit_value);

/// Copy of `system` with constants recomputed against another exit vector.
ReducedSystem with_exit_values(ReducedSystem system, SparseModel const& model, bool rewards,
                               std::span<double const> exit_value);

/// Sound value iteration on a reduced system, starting at x = 0, y = 1.
class SviEngine {
   public:
    SviEngine(ReducedSystem const& system, Direction direction, bool gauss_seidel, double lower = -kInf,
              double upper = kInf);

    void step();

    std::uint64_t iterations() const { return k_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double decision() const { return decision_; }
    std::vector<double> const& x() const { return x_; }
    std::vector<double> const& y() const { return y_; }
    std::vector<std::size_t> const& chosen() const { return chosen_; }

    /// Certified per-state bounds x + y * bound; infinite while the bound is.
    double lower_at(std::size_t i) const;
    double upper_at(std::size_t i) const;
    /// Termination test at local state i: y * (u - l) < 2 eps, or y == 0.
    bool converged_at(std::size_t i, double epsilon) const;
    /// Midpoint estimate x + y (l + u) / 2 at local state i.
    double value_at(std::size_t i) const;

   private:
    ReducedSystem const& system_;
    Direction direction_;
    bool gauss_seidel_;
    std::uint64_t k_ = 0;
    double lower_;
    double upper_;
    double decision_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> next_x_;
    std::vector<double> next_y_;
    std::vector<std::size_t> chosen_;
    std::vector<ChoiceScore> scores_;
};

/// One optimizing Bellman sweep (in place when gauss_seidel); returns the
/// largest absolute change.
double bellman_sweep(ReducedSystem const& system, Direction direction, bool gauss_seidel, std::vector<double>& x,
                     std::vector<double>& scratch);

}  // namespace soundvi::detail
