#include "soundvi/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "soundvi/errors.hpp"

namespace soundvi {

namespace {

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

using Adjacency = std::vector<std::vector<StateIndex>>;

struct TarjanResult {
    std::vector<std::vector<StateIndex>> components;
    std::vector<std::size_t> component_of;
};

// Iterative Tarjan over the nodes marked in `active`. Components come out in
// completion order, i.e. every edge leads to the same or an earlier component.
TarjanResult tarjan(Adjacency const& successors, StateSet const& active) {
    auto const n = successors.size();
    TarjanResult result;
    result.component_of.assign(n, kUnvisited);

    std::vector<std::size_t> index(n, kUnvisited);
    std::vector<std::size_t> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<StateIndex> stack;
    // (node, next successor position)
    std::vector<std::pair<StateIndex, std::size_t>> call_stack;
    std::size_t next_index = 0;

    for (StateIndex root = 0; root < n; ++root) {
        if (!active[root] || index[root] != kUnvisited) {
            continue;
        }
        call_stack.emplace_back(root, 0);
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call_stack.empty()) {
            auto& [v, pos] = call_stack.back();
            if (pos < successors[v].size()) {
                auto const w = successors[v][pos++];
                if (!active[w]) {
                    continue;
                }
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call_stack.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }
            auto const node = v;
            call_stack.pop_back();
            if (!call_stack.empty()) {
                auto const parent = call_stack.back().first;
                lowlink[parent] = std::min(lowlink[parent], lowlink[node]);
            }
            if (lowlink[node] == index[node]) {
                std::vector<StateIndex> component;
                StateIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    result.component_of[w] = result.components.size();
                    component.push_back(w);
                } while (w != node);
                std::sort(component.begin(), component.end());
                result.components.push_back(std::move(component));
            }
        }
    }
    return result;
}

Adjacency successor_lists(SparseModel const& model) {
    Adjacency succ(model.num_states());
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            for (auto const& t : model.transitions(c)) {
                succ[s].push_back(t.target);
            }
        }
        std::sort(succ[s].begin(), succ[s].end());
        succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
    }
    return succ;
}

bool all_targets_in(SparseModel const& model, ChoiceIndex c, StateSet const& set) {
    auto row = model.transitions(c);
    return std::all_of(row.begin(), row.end(), [&](auto const& t) { return set[t.target]; });
}

}  // namespace

StateSet prob0_max(SparseModel const& model, StateSet const& goal) {
    Adjacency predecessors(model.num_states());
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            for (auto const& t : model.transitions(c)) {
                predecessors[t.target].push_back(s);
            }
        }
    }
    StateSet reaches = goal;
    std::vector<StateIndex> frontier = goal.indices();
    while (!frontier.empty()) {
        auto const s = frontier.back();
        frontier.pop_back();
        for (auto p : predecessors[s]) {
            if (!reaches[p]) {
                reaches.set(p);
                frontier.push_back(p);
            }
        }
    }
    return reaches.complement();
}

StateSet prob0_min(SparseModel const& model, StateSet const& goal) {
    StateSet avoid = goal.complement();
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateIndex s = 0; s < model.num_states(); ++s) {
            if (!avoid[s]) {
                continue;
            }
            bool can_stay = false;
            for (auto c = model.first_choice(s); c < model.end_choice(s) && !can_stay; ++c) {
                can_stay = all_targets_in(model, c, avoid);
            }
            if (!can_stay) {
                avoid.reset(s);
                changed = true;
            }
        }
    }
    return avoid;
}

MecDecomposition mec_decompose(SparseModel const& model, StateSet const& restrict) {
    auto const n = model.num_states();
    StateSet candidate = restrict;
    std::vector<bool> allowed(model.num_choices(), false);
    for (auto s : candidate.indices()) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            allowed[c] = true;
        }
    }

    auto build_graph = [&]() {
        Adjacency succ(n);
        for (auto s : candidate.indices()) {
            for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
                if (allowed[c]) {
                    for (auto const& t : model.transitions(c)) {
                        succ[s].push_back(t.target);
                    }
                }
            }
        }
        return succ;
    };

    TarjanResult sccs;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto s : candidate.indices()) {
            bool any = false;
            for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
                if (allowed[c] && !all_targets_in(model, c, candidate)) {
                    allowed[c] = false;
                }
                any = any || allowed[c];
            }
            if (!any) {
                candidate.reset(s);
                changed = true;
            }
        }
        if (changed) {
            continue;
        }
        sccs = tarjan(build_graph(), candidate);
        for (auto s : candidate.indices()) {
            for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
                if (!allowed[c]) {
                    continue;
                }
                auto row = model.transitions(c);
                bool const leaves = std::any_of(row.begin(), row.end(), [&](auto const& t) {
                    return sccs.component_of[t.target] != sccs.component_of[s];
                });
                if (leaves) {
                    allowed[c] = false;
                    changed = true;
                }
            }
        }
    }

    MecDecomposition result;
    result.component_of.assign(n, std::nullopt);
    for (auto const& component : sccs.components) {
        EndComponent ec;
        for (auto s : component) {
            if (!candidate[s]) {
                continue;
            }
            std::vector<ChoiceIndex> kept;
            for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
                if (allowed[c]) {
                    kept.push_back(c);
                }
            }
            ec.states.push_back(s);
            ec.choices.push_back(std::move(kept));
        }
        if (ec.states.empty()) {
            continue;
        }
        for (auto s : ec.states) {
            result.component_of[s] = result.components.size();
        }
        result.components.push_back(std::move(ec));
    }
    return result;
}

QuotientMap collapse_end_components(SparseModel const& model, Partition const& partition) {
    auto const mecs = mec_decompose(model, partition.maybe);
    for (auto const& ec : mecs.components) {
        for (auto s : ec.states) {
            if (partition.goal[s]) {
                throw Error(ErrorCode::MecContainsGoal, "state " + std::to_string(s) + " is a goal state inside an end component");
            }
        }
    }
    auto const n = model.num_states();
    QuotientMap quotient;
    quotient.collapsed_components = mecs.components.size();
    if (mecs.empty()) {
        quotient.model = model;
        quotient.state_map.resize(n);
        for (StateIndex s = 0; s < n; ++s) {
            quotient.state_map[s] = s;
        }
        quotient.partition = partition;
        return quotient;
    }

    constexpr auto unassigned = std::numeric_limits<StateIndex>::max();
    std::vector<StateIndex> mec_state(mecs.components.size(), unassigned);
    quotient.state_map.assign(n, unassigned);
    std::vector<StateIndex> representative;  // first original state per quotient state
    for (StateIndex s = 0; s < n; ++s) {
        if (auto mec = mecs.component_of[s]) {
            if (mec_state[*mec] == unassigned) {
                mec_state[*mec] = representative.size();
                representative.push_back(s);
            }
            quotient.state_map[s] = mec_state[*mec];
        } else {
            quotient.state_map[s] = representative.size();
            representative.push_back(s);
        }
    }
    auto const m = representative.size();

    RawModel raw;
    raw.num_states = m;
    raw.initial_state = quotient.state_map[model.initial_state()];
    raw.row_groups.resize(m);
    auto add_choice = [&](StateIndex q, ChoiceIndex c) {
        RawChoice choice;
        choice.reward = model.reward(c);
        choice.action = model.action(c);
        for (auto const& t : model.transitions(c)) {
            choice.transitions.push_back(Transition{quotient.state_map[t.target], t.probability});
        }
        raw.row_groups[q].push_back(std::move(choice));
    };
    for (StateIndex s = 0; s < n; ++s) {
        auto const q = quotient.state_map[s];
        auto const mec = mecs.component_of[s];
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            if (mec) {
                auto row = model.transitions(c);
                bool const exits = std::any_of(row.begin(), row.end(),
                                               [&](auto const& t) { return mecs.component_of[t.target] != mec; });
                if (!exits) {
                    continue;
                }
            }
            add_choice(q, c);
        }
    }

    for (auto const& [name, states] : model.labels()) {
        StateSet mapped(m);
        for (auto s : states.indices()) {
            mapped.set(quotient.state_map[s]);
        }
        raw.labels.emplace(name, std::move(mapped));
    }

    quotient.model = validate_model(raw);
    StateSet goal(m);
    StateSet s0(m);
    for (StateIndex s = 0; s < n; ++s) {
        if (partition.goal[s]) {
            goal.set(quotient.state_map[s]);
        }
        if (partition.s0[s]) {
            s0.set(quotient.state_map[s]);
        }
    }
    quotient.partition = Partition::from(std::move(goal), std::move(s0));
    return quotient;
}

bool check_contracting(SparseModel const& model, StateSet const& target) {
    return mec_decompose(model, target.complement()).empty();
}

SccOrder scc_order(SparseModel const& model) {
    auto result = tarjan(successor_lists(model), StateSet(model.num_states(), true));
    return SccOrder{std::move(result.components), std::move(result.component_of)};
}

StateSet reachable_states(SparseModel const& model, StateIndex from) {
    StateSet seen(model.num_states());
    seen.set(from);
    std::vector<StateIndex> frontier{from};
    while (!frontier.empty()) {
        auto const s = frontier.back();
        frontier.pop_back();
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            for (auto const& t : model.transitions(c)) {
                if (!seen[t.target]) {
                    seen.set(t.target);
                    frontier.push_back(t.target);
                }
            }
        }
    }
    return seen;
}

}  // namespace soundvi
