#include "soundvi/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <string>

#include "soundvi/errors.hpp"

namespace soundvi {

namespace {

/// Dense transition data of the chain induced by one positional scheduler.
struct InducedChain {
    Eigen::MatrixXd p;
    Eigen::VectorXd reward;
};

void check_size(SparseModel const& model, StateSet const& goal) {
    if (model.num_states() > kOracleMaxStates) {
        throw Error(ErrorCode::TooLargeForOracle, std::to_string(model.num_states()) + " states");
    }
    std::size_t schedulers = 1;
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        if (!goal[s]) {
            schedulers *= model.num_choices(s);
            if (schedulers > kOracleMaxSchedulers) {
                throw Error(ErrorCode::TooLargeForOracle, "more than " + std::to_string(kOracleMaxSchedulers) +
                                                              " positional schedulers");
            }
        }
    }
}

void for_each_chain(SparseModel const& model, StateSet const& goal,
                    std::function<void(InducedChain const&)> const& visit) {
    auto const n = model.num_states();
    std::vector<std::size_t> pick(n, 0);
    InducedChain chain{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
    while (true) {
        chain.p.setZero();
        chain.reward.setZero();
        for (StateIndex s = 0; s < n; ++s) {
            if (goal[s]) {
                chain.p(s, s) = 1.0;
                continue;
            }
            auto const c = model.first_choice(s) + pick[s];
            chain.reward(s) = model.reward(c);
            for (auto const& t : model.transitions(c)) {
                chain.p(s, t.target) += t.probability;
            }
        }
        visit(chain);
        StateIndex s = 0;
        for (; s < n; ++s) {
            if (goal[s]) {
                continue;
            }
            if (++pick[s] < model.num_choices(s)) {
                break;
            }
            pick[s] = 0;
        }
        if (s == n) {
            return;
        }
    }
}

/// States of the chain with a path into `target`.
std::vector<bool> can_reach(Eigen::MatrixXd const& p, std::vector<bool> target) {
    auto const n = static_cast<std::size_t>(p.rows());
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (target[s]) {
                continue;
            }
            for (std::size_t t = 0; t < n; ++t) {
                if (p(s, t) > 0.0 && target[t]) {
                    target[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return target;
}

std::vector<bool> as_vector(StateSet const& set) {
    std::vector<bool> v(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        v[i] = set[i];
    }
    return v;
}

/// States from which the chain reaches the goal with probability one.
std::vector<bool> almost_sure(InducedChain const& chain, StateSet const& goal) {
    auto const reaches = can_reach(chain.p, as_vector(goal));
    std::vector<bool> doomed(reaches.size());
    for (std::size_t s = 0; s < reaches.size(); ++s) {
        doomed[s] = !reaches[s];
    }
    auto const risky = can_reach(chain.p, doomed);
    std::vector<bool> sure(reaches.size());
    for (std::size_t s = 0; s < reaches.size(); ++s) {
        sure[s] = !risky[s];
    }
    return sure;
}

/// Solves x = b + A x over the states flagged in `unknown`; other states
/// contribute `fixed`.
Eigen::VectorXd solve_chain(Eigen::MatrixXd const& p, Eigen::VectorXd const& b, std::vector<bool> const& unknown,
                            Eigen::VectorXd fixed) {
    std::vector<Eigen::Index> idx;
    for (std::size_t s = 0; s < unknown.size(); ++s) {
        if (unknown[s]) {
            idx.push_back(static_cast<Eigen::Index>(s));
        }
    }
    auto const m = static_cast<Eigen::Index>(idx.size());
    if (m == 0) {
        return fixed;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        rhs(i) = b(idx[i]);
        for (Eigen::Index t = 0; t < p.cols(); ++t) {
            if (unknown[static_cast<std::size_t>(t)]) {
                continue;
            }
            rhs(i) += p(idx[i], t) * fixed(t);
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            a(i, j) -= p(idx[i], idx[j]);
        }
    }
    Eigen::VectorXd solution = a.fullPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < m; ++i) {
        fixed(idx[i]) = solution(i);
    }
    return fixed;
}

}  // namespace

std::vector<double> oracle_solve(SparseModel const& model, StateSet const& goal, Objective objective,
                                 Direction direction) {
    check_size(model, goal);
    auto const n = model.num_states();
    bool const maximize = direction == Direction::Maximize;
    std::vector<double> best(n, maximize ? -std::numeric_limits<double>::infinity()
                                         : std::numeric_limits<double>::infinity());

    for_each_chain(model, goal, [&](InducedChain const& chain) {
        Eigen::VectorXd values;
        if (objective == Objective::Probability) {
            auto const reaches = can_reach(chain.p, as_vector(goal));
            Eigen::VectorXd fixed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            std::vector<bool> unknown(n, false);
            for (StateIndex s = 0; s < n; ++s) {
                if (goal[s]) {
                    fixed(static_cast<Eigen::Index>(s)) = 1.0;
                } else {
                    unknown[s] = reaches[s];
                }
            }
            values = solve_chain(chain.p, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), unknown, fixed);
        } else {
            auto const sure = almost_sure(chain, goal);
            if (!std::all_of(sure.begin(), sure.end(), [](bool b) { return b; })) {
                throw Error(ErrorCode::NotContracting, "a scheduler misses the goal with positive probability");
            }
            std::vector<bool> unknown(n);
            for (StateIndex s = 0; s < n; ++s) {
                unknown[s] = !goal[s];
            }
            values = solve_chain(chain.p, chain.reward, unknown, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
        }
        for (StateIndex s = 0; s < n; ++s) {
            double const v = values(static_cast<Eigen::Index>(s));
            best[s] = maximize ? std::max(best[s], v) : std::min(best[s], v);
        }
    });
    return best;
}

bool oracle_contracting(SparseModel const& model, StateSet const& goal) {
    check_size(model, goal);
    bool contracting = true;
    for_each_chain(model, goal, [&](InducedChain const& chain) {
        auto const sure = almost_sure(chain, goal);
        contracting = contracting && std::all_of(sure.begin(), sure.end(), [](bool b) { return b; });
    });
    return contracting;
}

}  // namespace soundvi
