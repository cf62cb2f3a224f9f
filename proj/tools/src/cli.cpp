#include "soundvi/tools/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "soundvi/errors.hpp"
#include "soundvi/ingest.hpp"
#include "soundvi/tools/bench.hpp"

namespace soundvi::tools {

namespace {

std::string num(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", v);
    return buffer;
}

std::vector<std::string> split_list(std::string const& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

struct CheckArgs {
    std::string tra;
    std::string lab;
    std::optional<std::string> srew;
    std::optional<std::string> trew;
    std::string goal;
    std::string objective = "prob";
    std::string direction = "max";
    std::string method = "svi";
    bool gauss_seidel = false;
    bool topological = false;
    double epsilon = 1e-6;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<std::string> stats;
    bool trace = false;
};

struct BenchArgs {
    std::string manifest;
    std::optional<std::string> out;
    std::string methods = "svi,ii";
    std::string variants = "plain";
    double epsilon = 1e-6;
    unsigned jobs = 1;
};

void append_stats(std::filesystem::path const& path, BenchRecord const& record) {
    bool const fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream file(path, std::ios::app);
    if (!file) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    if (fresh) {
        file << kCsvHeader << '\n';
    }
    file << csv_row(record) << '\n';
}

int run_check(CheckArgs const& args, std::ostream& out, std::ostream& err) {
    auto const bundle = load_model(args.tra, args.lab,
                                   args.srew ? std::optional<std::filesystem::path>(*args.srew) : std::nullopt,
                                   args.trew ? std::optional<std::filesystem::path>(*args.trew) : std::nullopt);
    auto const& model = bundle.model;
    auto const& goal = model.label(args.goal);

    SolverConfig config;
    config.method = parse_method(args.method);
    config.objective = args.objective == "reward" ? Objective::Reward : Objective::Probability;
    config.direction = args.direction == "min" ? Direction::Minimize : Direction::Maximize;
    config.epsilon = args.epsilon;
    config.gauss_seidel = args.gauss_seidel;
    config.topological = args.topological;
    config.lower = args.lower;
    config.upper = args.upper;
    if (args.trace) {
        config.observer = [&out](IterationSnapshot const& snap) {
            out << "trace k=" << snap.k << " lower=" << num(snap.lower) << " upper=" << num(snap.upper)
                << " decision=" << num(snap.decision) << " y_init=" << num(snap.y_initial) << '\n';
        };
    }
    if (config.method == Method::VI) {
        err << "warning: value iteration gives no error bound; the result is unsound\n";
    }

    auto const result = solve(model, goal, config);
    out << format_result_line(result) << '\n';

    if (args.stats) {
        BenchRecord record;
        record.model = std::filesystem::path(args.tra).stem().string();
        record.states = model.num_states();
        record.choices = model.num_choices();
        record.transitions = model.num_transitions();
        record.method = config.method;
        record.gauss_seidel = config.gauss_seidel;
        record.topological = config.topological;
        record.direction = config.direction;
        record.objective = config.objective;
        record.epsilon = config.epsilon;
        record.result = result.value;
        record.lower = result.lower;
        record.upper = result.upper;
        record.iterations = static_cast<std::int64_t>(result.iterations);
        record.time_ms = result.time_ms;
        append_stats(*args.stats, record);
    }
    if (result.status == SolveStatus::IterationLimit) {
        err << "error: IterationLimit: no convergence after " << result.iterations << " iterations\n";
        return kExitSolverError;
    }
    return kExitOk;
}

int run_bench(BenchArgs const& args, std::ostream& out) {
    BenchOptions options;
    options.methods.clear();
    for (auto const& m : split_list(args.methods)) {
        options.methods.push_back(parse_method(m));
    }
    options.variants.clear();
    for (auto const& v : split_list(args.variants)) {
        options.variants.push_back(parse_variant(v));
    }
    if (!(args.epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
    }
    options.epsilon = args.epsilon;
    options.jobs = args.jobs;
    auto const csv = to_csv(bench_run(read_manifest(args.manifest), options));
    if (args.out) {
        std::ofstream file(*args.out);
        if (!(file << csv)) {
            throw Error(ErrorCode::Io, "cannot write " + *args.out);
        }
    } else {
        out << csv;
    }
    return kExitOk;
}

}  // namespace

std::string format_result_line(SolveResult const& result) {
    return "result=" + num(result.value) + " bounds=[" + num(result.lower) + "," + num(result.upper) +
           "] iterations=" + std::to_string(result.iterations) + " time_ms=" + num(result.time_ms);
}

std::optional<ResultLine> parse_result_line(std::string_view line) {
    static std::regex const pattern(
        R"(^result=(\S+) bounds=\[([^,\]]+),([^,\]]+)\] iterations=(\d+) time_ms=(\S+)$)");
    std::match_results<std::string_view::const_iterator> match;
    if (!std::regex_match(line.begin(), line.end(), match, pattern)) {
        return std::nullopt;
    }
    try {
        ResultLine parsed;
        parsed.result = std::stod(match[1].str());
        parsed.lower = std::stod(match[2].str());
        parsed.upper = std::stod(match[3].str());
        parsed.iterations = std::stoull(match[4].str());
        parsed.time_ms = std::stod(match[5].str());
        return parsed;
    } catch (std::exception const&) {
        return std::nullopt;
    }
}

int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sound value iteration for Markov chains and MDPs", "soundvi"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "Solve one reachability or reward query");
    check_cmd->add_option("--tra", check.tra, "Transition file (.tra)")->required();
    check_cmd->add_option("--lab", check.lab, "Label file (.lab)")->required();
    check_cmd->add_option("--srew", check.srew, "State reward file");
    check_cmd->add_option("--trew", check.trew, "Transition reward file");
    check_cmd->add_option("--goal", check.goal, "Goal label")->required();
    check_cmd->add_option("--objective", check.objective)->check(CLI::IsMember({"prob", "reward"}));
    check_cmd->add_option("--direction", check.direction)->check(CLI::IsMember({"max", "min"}));
    check_cmd->add_option("--method", check.method)->check(CLI::IsMember({"vi", "ii", "svi"}));
    check_cmd->add_flag("--gauss-seidel", check.gauss_seidel);
    check_cmd->add_flag("--topological", check.topological);
    check_cmd->add_option("--epsilon", check.epsilon, "Absolute precision");
    check_cmd->add_option("--lower", check.lower, "Known lower bound on all values");
    check_cmd->add_option("--upper", check.upper, "Known upper bound on all values");
    check_cmd->add_option("--stats", check.stats, "Append a CSV record to this file");
    check_cmd->add_flag("--trace", check.trace, "Print per-iteration bounds");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run every manifest instance and emit CSV");
    bench_cmd->add_option("manifest", bench.manifest)->required();
    bench_cmd->add_option("--out", bench.out, "CSV output path (default stdout)");
    bench_cmd->add_option("--methods", bench.methods, "Comma-separated subset of vi,ii,svi");
    bench_cmd->add_option("--variants", bench.variants, "Comma-separated subset of plain,gs,topo,gs+topo");
    bench_cmd->add_option("--epsilon", bench.epsilon);
    bench_cmd->add_option("--jobs", bench.jobs)->check(CLI::PositiveNumber);

    std::string report_csv;
    auto* report_cmd = app.add_subcommand("report", "Compare II against SVI in a bench CSV");
    report_cmd->add_option("csv", report_csv)->required();

    std::vector<char const*> argv;
    for (auto const& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << '\n'
            << "usage: soundvi check --tra F --lab F --goal LABEL [options] | bench MANIFEST | report CSV\n";
        return kExitInputError;
    }

    try {
        if (check_cmd->parsed()) {
            return run_check(check, out, err);
        }
        if (bench_cmd->parsed()) {
            return run_bench(bench, out);
        }
        out << compare_report(parse_csv(read_file(report_csv)));
        return kExitOk;
    } catch (Error const& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e.code()) ? kExitInputError : kExitSolverError;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolverError;
    }
}

}  // namespace soundvi::tools
