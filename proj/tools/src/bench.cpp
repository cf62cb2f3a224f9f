#include "soundvi/tools/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

#include "soundvi/errors.hpp"
#include "soundvi/ingest.hpp"

namespace soundvi::tools {

namespace {

std::string real(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

std::string short_real(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return buffer;
}

std::vector<std::string> split(std::string_view text, char separator) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto const end = text.find(separator, start);
        parts.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) {
            return parts;
        }
        start = end + 1;
    }
}

std::vector<std::string> tokens(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string token; in >> token;) {
        out.push_back(token);
    }
    return out;
}

std::optional<double> to_double(std::string const& text) {
    if (text.empty()) {
        return std::nullopt;
    }
    char* end = nullptr;
    double const v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
        return std::nullopt;
    }
    return v;
}

std::optional<Objective> to_objective(std::string_view text) {
    if (text == "prob") {
        return Objective::Probability;
    }
    if (text == "reward") {
        return Objective::Reward;
    }
    return std::nullopt;
}

std::optional<Direction> to_direction(std::string_view text) {
    if (text == "max") {
        return Direction::Maximize;
    }
    if (text == "min") {
        return Direction::Minimize;
    }
    return std::nullopt;
}

std::string variant_name(bool gauss_seidel, bool topological) {
    if (gauss_seidel && topological) {
        return "gs+topo";
    }
    if (gauss_seidel) {
        return "gs";
    }
    return topological ? "topo" : "plain";
}

BenchRecord run_one(ManifestEntry const& entry, std::optional<ModelBundle> const& bundle,
                    std::string const& load_error, Method method, Variant variant, BenchOptions const& options) {
    BenchRecord record;
    record.model = entry.name;
    record.method = method;
    record.gauss_seidel = variant.gauss_seidel;
    record.topological = variant.topological;
    record.direction = entry.direction;
    record.objective = entry.objective;
    record.epsilon = options.epsilon;
    auto fail = [&](std::string const& message) {
        record.result = record.lower = record.upper = record.time_ms = std::nan("");
        record.iterations = -1;
        record.error = message;
        return record;
    };
    if (!bundle) {
        return fail(load_error);
    }
    auto const& model = bundle->model;
    record.states = model.num_states();
    record.choices = model.num_choices();
    record.transitions = model.num_transitions();
    try {
        SolverConfig config;
        config.method = method;
        config.direction = entry.direction;
        config.objective = entry.objective;
        config.epsilon = options.epsilon;
        config.gauss_seidel = variant.gauss_seidel;
        config.topological = variant.topological;
        config.lower = entry.lower;
        config.upper = entry.upper;
        config.max_iterations = options.max_iterations;
        auto const result = solve(model, model.label(entry.goal), config);
        if (result.status == SolveStatus::IterationLimit) {
            return fail("IterationLimit: no convergence after " + std::to_string(result.iterations) + " iterations");
        }
        record.result = result.value;
        record.lower = result.lower;
        record.upper = result.upper;
        record.iterations = static_cast<std::int64_t>(result.iterations);
        record.time_ms = result.time_ms;
        return record;
    } catch (std::exception const& e) {
        return fail(e.what());
    }
}

double geometric_mean(std::vector<double> const& values) {
    double log_sum = 0.0;
    for (double v : values) {
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text, std::filesystem::path const& base_dir) {
    std::vector<ManifestEntry> entries;
    std::size_t line_number = 0;
    for (auto const& line : split(text, '\n')) {
        ++line_number;
        auto const fields = tokens(line);
        if (fields.empty() || fields.front().front() == '#') {
            continue;
        }
        auto bad = [&](std::string const& why) {
            return Error(ErrorCode::ParseError, "manifest line " + std::to_string(line_number) + ": " + why);
        };
        if (fields.size() < 6) {
            throw bad("expected <name> <tra> <lab> <goal> <objective> <direction>");
        }
        ManifestEntry entry;
        entry.name = fields[0];
        entry.tra = base_dir / fields[1];
        entry.lab = base_dir / fields[2];
        entry.goal = fields[3];
        auto objective = to_objective(fields[4]);
        auto direction = to_direction(fields[5]);
        if (!objective || !direction) {
            throw bad("objective must be prob|reward and direction max|min");
        }
        entry.objective = *objective;
        entry.direction = *direction;
        for (std::size_t i = 6; i < fields.size(); ++i) {
            auto const eq = fields[i].find('=');
            if (eq == std::string::npos) {
                throw bad("expected key=value, got '" + fields[i] + "'");
            }
            auto const key = fields[i].substr(0, eq);
            auto const value = fields[i].substr(eq + 1);
            if (key == "lower" || key == "upper") {
                auto v = to_double(value);
                if (!v) {
                    throw bad("'" + value + "' is not a number");
                }
                (key == "lower" ? entry.lower : entry.upper) = *v;
            } else if (key == "srew") {
                entry.srew = base_dir / value;
            } else if (key == "trew") {
                entry.trew = base_dir / value;
            } else {
                throw bad("unknown key '" + key + "'");
            }
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<ManifestEntry> read_manifest(std::filesystem::path const& path) {
    return parse_manifest(read_file(path), path.parent_path());
}

Variant parse_variant(std::string_view text) {
    if (text == "plain") {
        return {false, false};
    }
    if (text == "gs") {
        return {true, false};
    }
    if (text == "topo") {
        return {false, true};
    }
    if (text == "gs+topo") {
        return {true, true};
    }
    throw Error(ErrorCode::InvalidConfig, "unknown variant '" + std::string(text) + "'");
}

std::vector<BenchRecord> bench_run(std::vector<ManifestEntry> const& entries, BenchOptions const& options) {
    struct Task {
        std::size_t entry;
        Method method;
        Variant variant;
    };
    std::vector<std::optional<ModelBundle>> bundles(entries.size());
    std::vector<std::string> load_errors(entries.size());
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        try {
            bundles[i] = load_model(entries[i].tra, entries[i].lab, entries[i].srew, entries[i].trew);
        } catch (std::exception const& e) {
            load_errors[i] = e.what();
        }
        for (auto method : options.methods) {
            for (auto variant : options.variants) {
                tasks.push_back({i, method, variant});
            }
        }
    }

    std::vector<BenchRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (auto t = next++; t < tasks.size(); t = next++) {
            auto const& task = tasks[t];
            records[t] = run_one(entries[task.entry], bundles[task.entry], load_errors[task.entry], task.method,
                                 task.variant, options);
        }
    };
    auto const jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }
    return records;
}

std::string csv_row(BenchRecord const& r) {
    std::string row = r.model + "," + std::to_string(r.states) + "," + std::to_string(r.choices) + "," +
                      std::to_string(r.transitions) + "," + std::string(to_string(r.method)) + "," +
                      (r.gauss_seidel ? "1" : "0") + "," + (r.topological ? "1" : "0") + "," +
                      std::string(to_string(r.direction)) + "," + std::string(to_string(r.objective)) + "," +
                      real(r.epsilon) + "," + real(r.result) + "," + real(r.lower) + "," + real(r.upper) + "," +
                      std::to_string(r.iterations) + "," + real(r.time_ms);
    if (r.error) {
        std::string message = *r.error;
        for (auto& ch : message) {
            if (ch == ',' || ch == '\n' || ch == '\r') {
                ch = ';';
            }
        }
        row += ",error:" + message;
    }
    return row;
}

std::string to_csv(std::vector<BenchRecord> const& records) {
    std::string csv(kCsvHeader);
    csv += '\n';
    for (auto const& r : records) {
        csv += csv_row(r);
        csv += '\n';
    }
    return csv;
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
    auto lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
    }
    if (lines.empty() || lines.front() != kCsvHeader) {
        throw Error(ErrorCode::MalformedCsv, "missing or unexpected header");
    }
    std::vector<BenchRecord> records;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        auto bad = [&](std::string const& why) {
            return Error(ErrorCode::MalformedCsv, "line " + std::to_string(n + 1) + ": " + why);
        };
        auto fields = split(lines[n], ',');
        if (fields.size() < 15) {
            throw bad("expected 15 fields, got " + std::to_string(fields.size()));
        }
        BenchRecord r;
        if (fields.size() > 15) {
            std::string rest = fields[15];
            for (std::size_t i = 16; i < fields.size(); ++i) {
                rest += "," + fields[i];
            }
            if (rest.rfind("error:", 0) != 0) {
                throw bad("unexpected trailing field");
            }
            r.error = rest.substr(6);
        }
        auto number = [&](std::size_t i) {
            auto v = to_double(fields[i]);
            if (!v) {
                throw bad("field " + std::to_string(i + 1) + " ('" + fields[i] + "') is not a number");
            }
            return *v;
        };
        auto flag = [&](std::size_t i) {
            if (fields[i] != "0" && fields[i] != "1") {
                throw bad("field " + std::to_string(i + 1) + " must be 0 or 1");
            }
            return fields[i] == "1";
        };
        auto count = [&](std::size_t i) {
            double const v = number(i);
            if (v < 0 || v != std::floor(v)) {
                throw bad("field " + std::to_string(i + 1) + " must be a non-negative integer");
            }
            return static_cast<std::size_t>(v);
        };
        r.model = fields[0];
        r.states = count(1);
        r.choices = count(2);
        r.transitions = count(3);
        try {
            r.method = parse_method(fields[4]);
        } catch (Error const&) {
            throw bad("unknown method '" + fields[4] + "'");
        }
        r.gauss_seidel = flag(5);
        r.topological = flag(6);
        auto direction = to_direction(fields[7]);
        auto objective = to_objective(fields[8]);
        if (!direction || !objective) {
            throw bad("bad direction or objective");
        }
        r.direction = *direction;
        r.objective = *objective;
        r.epsilon = number(9);
        r.result = number(10);
        r.lower = number(11);
        r.upper = number(12);
        double const iterations = number(13);
        if (iterations != std::floor(iterations) || iterations < -1) {
            throw bad("iterations must be an integer >= -1");
        }
        r.iterations = static_cast<std::int64_t>(iterations);
        r.time_ms = number(14);
        records.push_back(std::move(r));
    }
    return records;
}

std::string compare_report(std::vector<BenchRecord> const& records) {
    struct Pair {
        BenchRecord const* svi = nullptr;
        BenchRecord const* ii = nullptr;
        std::string label;
    };
    std::vector<std::string> order;
    std::map<std::string, Pair> groups;
    for (auto const& r : records) {
        auto const label = r.model + " variant=" + variant_name(r.gauss_seidel, r.topological) + " " +
                           std::string(to_string(r.direction)) + " " + std::string(to_string(r.objective)) +
                           " epsilon=" + short_real(r.epsilon);
        auto [it, inserted] = groups.try_emplace(label);
        if (inserted) {
            order.push_back(label);
            it->second.label = label;
        }
        if (r.method == Method::SVI) {
            it->second.svi = &r;
        } else if (r.method == Method::II) {
            it->second.ii = &r;
        }
    }

    std::ostringstream out;
    std::vector<double> iteration_ratios;
    std::vector<double> time_ratios;
    std::vector<std::pair<double, double>> iteration_points;
    std::vector<std::pair<double, double>> time_points;
    for (auto const& label : order) {
        auto const& pair = groups[label];
        bool const usable = pair.svi && pair.ii && pair.svi->iterations >= 0 && pair.ii->iterations >= 0;
        std::string iteration_ratio = "n/a";
        std::string time_ratio = "n/a";
        if (usable) {
            iteration_points.emplace_back(pair.svi->iterations, pair.ii->iterations);
            time_points.emplace_back(pair.svi->time_ms, pair.ii->time_ms);
            if (pair.svi->iterations > 0) {
                double const ratio =
                    static_cast<double>(pair.ii->iterations) / static_cast<double>(pair.svi->iterations);
                iteration_ratio = short_real(ratio);
                if (ratio > 0) {
                    iteration_ratios.push_back(ratio);
                }
            }
            if (pair.svi->time_ms > 0 && pair.ii->time_ms > 0) {
                double const ratio = pair.ii->time_ms / pair.svi->time_ms;
                time_ratio = short_real(ratio);
                time_ratios.push_back(ratio);
            }
        }
        out << label << " ii/svi iterations=" << iteration_ratio << " time=" << time_ratio << '\n';
    }
    out << "summary instances=" << order.size() << " compared=" << iteration_points.size()
        << " geomean_iterations=" << (iteration_ratios.empty() ? "n/a" : short_real(geometric_mean(iteration_ratios)))
        << " geomean_time=" << (time_ratios.empty() ? "n/a" : short_real(geometric_mean(time_ratios))) << '\n';
    out << "# scatter iterations (svi ii)\n";
    for (auto const& [svi, ii] : iteration_points) {
        out << real(svi) << ' ' << real(ii) << '\n';
    }
    out << "# scatter time_ms (svi ii)\n";
    for (auto const& [svi, ii] : time_points) {
        out << real(svi) << ' ' << real(ii) << '\n';
    }
    return out.str();
}

}  // namespace soundvi::tools
