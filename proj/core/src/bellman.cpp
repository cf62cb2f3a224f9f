#include "soundvi/bellman.hpp"

#include <cmath>
#include <limits>

namespace soundvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(double candidate, double incumbent, Direction direction) {
    return direction == Direction::Maximize ? candidate > incumbent : candidate < incumbent;
}

BellmanStep bellman_step(SparseModel const& model, Partition const& partition, std::span<double const> x,
                         Direction direction, bool rewards) {
    BellmanStep step;
    step.values.assign(x.begin(), x.end());
    step.scheduler.choice_of.assign(model.num_states(), 0);
    for (auto s : partition.maybe.indices()) {
        double best = 0.0;
        std::size_t best_local = 0;
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            double v = rewards ? model.reward(c) : 0.0;
            for (auto const& t : model.transitions(c)) {
                v += t.probability * x[t.target];
            }
            auto const local = c - model.first_choice(s);
            if (local == 0 || better(v, best, direction)) {
                best = v;
                best_local = local;
            }
        }
        step.values[s] = best;
        step.scheduler.choice_of[s] = best_local;
    }
    return step;
}

}  // namespace

std::size_t select_choice(std::span<ChoiceScore const> scores, double bound, Direction direction) {
    std::size_t best = 0;
    if (std::isfinite(bound)) {
        double best_value = scores[0].x + scores[0].y * bound;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            double const v = scores[i].x + scores[i].y * bound;
            if (better(v, best_value, direction)) {
                best = i;
                best_value = v;
            }
        }
        return best;
    }
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i].y > scores[best].y ||
            (scores[i].y == scores[best].y && better(scores[i].x, scores[best].x, direction))) {
            best = i;
        }
    }
    return best;
}

double decision_value(std::span<ChoiceScore const> scores, std::size_t chosen, Direction direction) {
    bool const maximize = direction == Direction::Maximize;
    double result = maximize ? -kInf : kInf;
    auto const& a = scores[chosen];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i == chosen) {
            continue;
        }
        double const y_delta = a.y - scores[i].y;
        if (y_delta > 0.0) {
            double const ratio = (scores[i].x - a.x) / y_delta;
            result = maximize ? std::max(result, ratio) : std::min(result, ratio);
        }
    }
    return result;
}

std::vector<ChoiceScore> choice_scores(SparseModel const& model, std::span<double const> x, std::span<double const> y,
                                       StateIndex s, bool rewards) {
    std::vector<ChoiceScore> scores;
    scores.reserve(model.num_choices(s));
    for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
        ChoiceScore score{rewards ? model.reward(c) : 0.0, 0.0};
        for (auto const& t : model.transitions(c)) {
            score.x += t.probability * x[t.target];
            score.y += t.probability * y[t.target];
        }
        scores.push_back(score);
    }
    return scores;
}

BellmanStep bellman_step_f(SparseModel const& model, Partition const& partition, std::span<double const> x,
                           Direction direction) {
    return bellman_step(model, partition, x, direction, false);
}

BellmanStep bellman_step_g(SparseModel const& model, Partition const& partition, std::span<double const> x,
                           Direction direction) {
    return bellman_step(model, partition, x, direction, true);
}

std::vector<double> bellman_step_h(SparseModel const& model, Partition const& partition, std::span<double const> y,
                                   Scheduler const& scheduler) {
    std::vector<double> next(model.num_states(), 0.0);
    for (auto s : partition.maybe.indices()) {
        double v = 0.0;
        for (auto const& t : model.transitions(model.first_choice(s) + scheduler.choice_of[s])) {
            v += t.probability * y[t.target];
        }
        next[s] = v;
    }
    return next;
}

std::size_t find_action(SparseModel const& model, std::span<double const> x, std::span<double const> y, StateIndex s,
                        double bound, Direction direction, bool rewards) {
    auto const scores = choice_scores(model, x, y, s, rewards);
    return select_choice(scores, bound, direction);
}

double decision_value(SparseModel const& model, std::span<double const> x, std::span<double const> y, StateIndex s,
                      std::size_t chosen, Direction direction, bool rewards) {
    auto const scores = choice_scores(model, x, y, s, rewards);
    return decision_value(scores, chosen, direction);
}

}  // namespace soundvi
