// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. `--known-failure N` (repeatable) expects criterion N
// to fail instead; the run then fails if N passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "checks.hpp"
#include "random_models.hpp"
#include "soundvi/solver.hpp"

using namespace soundvi;
using namespace soundvi::testing;

namespace {

constexpr std::uint64_t kSuiteSeed = 0x5eed'0001;
constexpr int kSuiteSize = 600;

std::set<int> known_failures;
bool as_expected = true;

void report(int criterion, bool pass, std::string const& detail) {
    bool const known = known_failures.count(criterion) != 0;
    as_expected = as_expected && pass != known;
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << "  " << detail
              << (known ? "  [known failure]" : "") << std::endl;
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", v);
    return buffer;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<IterationSnapshot> trace(SparseModel const& model, StateSet const& goal, double epsilon,
                                     SolveResult* result = nullptr) {
    std::vector<IterationSnapshot> snaps;
    SolverConfig config;
    config.epsilon = epsilon;
    config.observer = [&](IterationSnapshot const& s) { snaps.push_back(s); };
    auto const r = solve(model, goal, config);
    if (result) {
        *result = r;
    }
    return snaps;
}

SolveResult run(SparseModel const& model, StateSet const& goal, Method method, double epsilon) {
    SolverConfig config;
    config.method = method;
    config.epsilon = epsilon;
    return solve(model, goal, config);
}

void criterion1() {
    auto const model = leaky_chain();
    auto const goal = leaky_goal();
    bool pass = true;
    std::ostringstream detail;
    for (double eps : {1e-2, 1e-6, 1e-10}) {
        SolveResult r;
        auto const snaps = trace(model, goal, eps, &r);
        bool const ok = r.iterations == 3 && snaps.size() == 3 && near(snaps[2].lower, 0.75, 1e-12) &&
                        near(snaps[2].upper, 0.75, 1e-12) && near(r.value, 0.75, 1e-12) &&
                        near(snaps[2].x[0], 0.00003, 1e-12) && near(snaps[2].y[0], 0.99996, 1e-12);
        pass = pass && ok;
        detail << "eps=" << eps << ":k=" << r.iterations << ",result=" << fmt(r.value) << " ";
        if (eps == 1e-6 && snaps.size() >= 3) {
            detail << "x3=" << fmt(snaps[2].x[0]) << " y3=" << fmt(snaps[2].y[0]) << " ";
        }
    }
    // Best of several runs to keep scheduler noise out of a sub-millisecond timing.
    double best_ms = INFINITY;
    for (int i = 0; i < 20; ++i) {
        best_ms = std::min(best_ms, run(model, goal, Method::SVI, 1e-6).time_ms);
    }
    pass = pass && best_ms < 1.0;
    detail << "time_ms=" << fmt(best_ms) << " (tol 1e-12, limit 1 ms)";
    report(1, pass, detail.str());
}

void criterion2() {
    SolveResult r;
    auto const snaps = trace(split_mdp(), split_goal(), 1e-6, &r);
    bool pass = snaps.size() >= 2;
    std::ostringstream detail;
    if (pass) {
        pass = near(snaps[0].decision, 0.75, 1e-12) && near(snaps[0].lower, 0.0, 1e-12) &&
               near(snaps[0].upper, 1.0, 1e-12) && near(snaps[1].lower, 0.1, 1e-12) &&
               near(snaps[1].upper, 0.75, 1e-12);
        detail << "d1=" << fmt(snaps[0].decision) << " l1=" << fmt(snaps[0].lower) << " u1=" << fmt(snaps[0].upper)
               << " l2=" << fmt(snaps[1].lower) << " u2=" << fmt(snaps[1].upper) << " ";
    }
    pass = pass && near(r.value, 0.5, 1e-6);
    detail << "result=" << fmt(r.value) << " (tol 1e-12 on trace, eps=1e-6 on result)";
    report(2, pass, detail.str());
}

void criterion3() {
    auto const model = leaky_mdp();
    auto const goal = leaky_goal();
    auto const vi6 = run(model, goal, Method::VI, 1e-6).value;
    auto const vi8 = run(model, goal, Method::VI, 1e-8).value;
    auto const svi = run(model, goal, Method::SVI, 1e-6).value;
    bool const pass = vi6 >= 0.720 && vi6 <= 0.730 && vi8 >= 0.7490 && vi8 <= 0.7500 && near(svi, 0.75, 1e-6);
    report(3, pass,
           "vi(1e-6)=" + fmt(vi6) + " in [0.720,0.730]; vi(1e-8)=" + fmt(vi8) + " in [0.7490,0.7500]; svi=" +
               fmt(svi) + " (tol 1e-6)");
}

void criterion4() {
    auto const model = leaky_mdp();
    auto const goal = leaky_goal();
    auto const ii = run(model, goal, Method::II, 1e-6).iterations;
    auto const svi = run(model, goal, Method::SVI, 1e-6).iterations;
    bool const pass = ii >= 240'000 && ii <= 360'000 && svi < ii;
    report(4, pass,
           "ii_iterations=" + std::to_string(ii) + " in [240000,360000]; svi_iterations=" + std::to_string(svi));
}

std::vector<RandomInstance> const& suite() {
    static auto const instances = [] {
        std::mt19937_64 rng(kSuiteSeed);
        std::vector<RandomInstance> out;
        for (int i = 0; i < kSuiteSize; ++i) {
            out.push_back(random_instance(rng, i % 3 == 0));
        }
        return out;
    }();
    return instances;
}

void print_first_failure(CheckOutcome const& outcome, RandomInstance const& inst) {
    std::cerr << outcome.failures.front() << '\n' << describe(inst) << '\n';
}

void criterion5() {
    auto const start = std::chrono::steady_clock::now();
    std::size_t failed = 0, runs = 0, mdps = 0, rewards = 0;
    for (auto const& inst : suite()) {
        auto const outcome = check_oracle_agreement(inst, 1e-8);
        runs += outcome.samples;
        mdps += !inst.model.is_mc();
        rewards += inst.objective == Objective::Reward;
        if (!outcome.ok()) {
            if (failed++ == 0) {
                print_first_failure(outcome, inst);
            }
        }
    }
    double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool const pass = failed == 0 && seconds < 60.0;
    report(5, pass,
           "instances=" + std::to_string(suite().size()) + " mdps=" + std::to_string(mdps) +
               " reward=" + std::to_string(rewards) + " solver_runs=" + std::to_string(runs) +
               " failed=" + std::to_string(failed) + " time_s=" + fmt(seconds) + " (eps 1e-8, limit 60 s)");
}

void criterion6() {
    std::size_t failed = 0, mc_failed = 0, mdp_failed = 0;
    for (auto const& inst : suite()) {
        auto const outcome = check_dominance(inst, 1e-6);
        if (!outcome.ok()) {
            ++(inst.model.is_mc() ? mc_failed : mdp_failed);
            if (failed++ == 0) {
                print_first_failure(outcome, inst);
            }
        }
    }
    std::string examples;
    for (auto const& [name, model, goal] : {std::tuple{"leaky_chain", leaky_chain(), leaky_goal()},
                                            std::tuple{"leaky_mdp", leaky_mdp(), leaky_goal()},
                                            std::tuple{"split_mdp", split_mdp(), split_goal()}}) {
        auto const outcome = check_dominance(model, goal, 1e-6);
        examples += std::string(" ") + name + (outcome.ok() ? ":ok" : ":" + outcome.failures.front());
        failed += !outcome.ok();
    }
    report(6, failed == 0,
           "instances=" + std::to_string(suite().size() + 3) + " violations=" + std::to_string(failed) +
               " (mc=" + std::to_string(mc_failed) + " mdp=" + std::to_string(mdp_failed) + ")" + examples +
               " (eps 1e-6)");
}

void criterion7() {
    std::size_t failed = 0, instances = 0, comparisons = 0;
    for (auto const& inst : suite()) {
        if (inst.model.num_states() > 8) {
            continue;
        }
        ++instances;
        auto const outcome = check_step_semantics(inst, 1e-12);
        comparisons += outcome.samples;
        if (!outcome.ok() && failed++ == 0) {
            print_first_failure(outcome, inst);
        }
    }
    report(7, failed == 0 && instances > 0,
           "instances=" + std::to_string(instances) + " state_iterations=" + std::to_string(comparisons) +
               " failed=" + std::to_string(failed) + " (k<=6, tol 1e-12)");
}

void criterion8() {
    std::mt19937_64 rng(kSuiteSeed + 8);
    std::size_t failed = 0, samples = 0;
    for (auto const& inst : suite()) {
        auto const outcome = check_decision_stability(inst, rng);
        samples += outcome.samples;
        if (!outcome.ok() && failed++ == 0) {
            print_first_failure(outcome, inst);
        }
    }
    report(8, failed == 0 && samples >= 1000,
           "samples=" + std::to_string(samples) + " (>= 1000, 5 bounds each) failed=" + std::to_string(failed));
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string const arg = argv[i];
        if (arg == "--known-failure" && i + 1 < argc) {
            known_failures.insert(std::stoi(argv[++i]));
        } else {
            std::cerr << "usage: soundvi_acceptance [--known-failure N]...\n";
            return 2;
        }
    }
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    return as_expected ? 0 : 1;
}
