#include "engine.hpp"

#include <algorithm>
#include <cmath>

namespace soundvi::detail {

namespace {

constexpr auto kOutside = std::numeric_limits<std::size_t>::max();

}  // namespace

ReducedSystem reduce(SparseModel const& model, std::span<StateIndex const> members, bool rewards,
                     std::span<double const> exit_value) {
    ReducedSystem system;
    system.states.assign(members.begin(), members.end());
    std::vector<std::size_t> local(model.num_states(), kOutside);
    for (std::size_t i = 0; i < members.size(); ++i) {
        local[members[i]] = i;
    }
    system.group_start.push_back(0);
    system.entry_start.push_back(0);
    for (auto s : members) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            double constant = rewards ? model.reward(c) : 0.0;
            for (auto const& t : model.transitions(c)) {
                if (local[t.target] == kOutside) {
                    constant += t.probability * exit_value[t.target];
                } else {
                    system.entries.push_back({local[t.target], t.probability});
                }
            }
            system.entry_start.push_back(system.entries.size());
            system.constant.push_back(constant);
            system.local_choice.push_back(c - model.first_choice(s));
        }
        system.group_start.push_back(system.constant.size());
    }
    return system;
}

ReducedSystem with_exit_values(ReducedSystem system, SparseModel const& model, bool rewards,
                               std::span<double const> exit_value) {
    std::vector<bool> member(model.num_states(), false);
    for (auto s : system.states) {
        member[s] = true;
    }
    std::size_t choice = 0;
    for (auto s : system.states) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c, ++choice) {
            double constant = rewards ? model.reward(c) : 0.0;
            for (auto const& t : model.transitions(c)) {
                if (!member[t.target]) {
                    constant += t.probability * exit_value[t.target];
                }
            }
            system.constant[choice] = constant;
        }
    }
    return system;
}

SviEngine::SviEngine(ReducedSystem const& system, Direction direction, bool gauss_seidel, double lower, double upper)
    : system_(system),
      direction_(direction),
      gauss_seidel_(gauss_seidel),
      lower_(lower),
      upper_(upper),
      decision_(direction == Direction::Maximize ? -kInf : kInf),
      x_(system.size(), 0.0),
      y_(system.size(), 1.0),
      next_x_(gauss_seidel ? 0 : system.size()),
      next_y_(gauss_seidel ? 0 : system.size()),
      chosen_(system.size(), 0) {}

void SviEngine::step() {
    bool const maximize = direction_ == Direction::Maximize;
    double const bound = maximize ? upper_ : lower_;
    auto& out_x = gauss_seidel_ ? x_ : next_x_;
    auto& out_y = gauss_seidel_ ? y_ : next_y_;

    for (std::size_t i = 0; i < system_.size(); ++i) {
        auto const first = system_.group_start[i];
        auto const last = system_.group_start[i + 1];
        scores_.clear();
        for (auto c = first; c < last; ++c) {
            ChoiceScore score{system_.constant[c], 0.0};
            for (auto e = system_.entry_start[c]; e < system_.entry_start[c + 1]; ++e) {
                auto const& entry = system_.entries[e];
                score.x += entry.probability * x_[entry.target];
                score.y += entry.probability * y_[entry.target];
            }
            scores_.push_back(score);
        }
        std::size_t pick = 0;
        if (scores_.size() > 1) {
            pick = select_choice(scores_, bound, direction_);
            double const dv = decision_value(scores_, pick, direction_);
            decision_ = maximize ? std::max(decision_, dv) : std::min(decision_, dv);
        }
        out_x[i] = scores_[pick].x;
        out_y[i] = scores_[pick].y;
        chosen_[i] = pick;
    }
    if (!gauss_seidel_) {
        std::swap(x_, next_x_);
        std::swap(y_, next_y_);
    }
    ++k_;

    if (std::any_of(y_.begin(), y_.end(), [](double v) { return v >= 1.0; }) || system_.size() == 0) {
        return;
    }
    double min_ratio = kInf;
    double max_ratio = -kInf;
    for (std::size_t i = 0; i < system_.size(); ++i) {
        double const ratio = x_[i] / (1.0 - y_[i]);
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
    }
    if (maximize) {
        lower_ = std::max(lower_, min_ratio);
        upper_ = std::min(upper_, std::max(decision_, max_ratio));
    } else {
        lower_ = std::max(lower_, std::min(decision_, min_ratio));
        upper_ = std::min(upper_, max_ratio);
    }
}

double SviEngine::lower_at(std::size_t i) const {
    if (y_[i] == 0.0) {
        return x_[i];
    }
    return std::isfinite(lower_) ? x_[i] + y_[i] * lower_ : -kInf;
}

double SviEngine::upper_at(std::size_t i) const {
    if (y_[i] == 0.0) {
        return x_[i];
    }
    return std::isfinite(upper_) ? x_[i] + y_[i] * upper_ : kInf;
}

bool SviEngine::converged_at(std::size_t i, double epsilon) const {
    if (y_[i] == 0.0) {
        return true;
    }
    return std::isfinite(lower_) && std::isfinite(upper_) && y_[i] * (upper_ - lower_) < 2.0 * epsilon;
}

double SviEngine::value_at(std::size_t i) const {
    if (y_[i] == 0.0 || !std::isfinite(lower_) || !std::isfinite(upper_)) {
        return x_[i];
    }
    return x_[i] + y_[i] * (lower_ + upper_) / 2.0;
}

double bellman_sweep(ReducedSystem const& system, Direction direction, bool gauss_seidel, std::vector<double>& x,
                     std::vector<double>& scratch) {
    bool const maximize = direction == Direction::Maximize;
    if (!gauss_seidel) {
        scratch.resize(x.size());
    }
    auto& out = gauss_seidel ? x : scratch;
    double change = 0.0;
    for (std::size_t i = 0; i < system.size(); ++i) {
        double best = 0.0;
        for (auto c = system.group_start[i]; c < system.group_start[i + 1]; ++c) {
            double v = system.constant[c];
            for (auto e = system.entry_start[c]; e < system.entry_start[c + 1]; ++e) {
                v += system.entries[e].probability * x[system.entries[e].target];
            }
            if (c == system.group_start[i] || (maximize ? v > best : v < best)) {
                best = v;
            }
        }
        change = std::max(change, std::abs(best - x[i]));
        out[i] = best;
    }
    if (!gauss_seidel) {
        std::swap(x, scratch);
    }
    return change;
}

}  // namespace soundvi::detail
