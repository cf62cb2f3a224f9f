#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soundvi/model.hpp"
#include "soundvi/solver.hpp"

namespace soundvi::tools {

inline constexpr std::string_view kCsvHeader =
    "model,states,choices,transitions,method,gauss_seidel,topological,direction,objective,epsilon,result,lower,"
    "upper,iterations,time_ms";

/// One manifest line:
///   <name> <tra> <lab> <goal> <objective> <direction> [key=value ...]
/// with optional keys lower, upper, srew, trew. Paths are relative to the
/// manifest's directory.
struct ManifestEntry {
    std::string name;
    std::filesystem::path tra;
    std::filesystem::path lab;
    std::string goal;
    Objective objective = Objective::Probability;
    Direction direction = Direction::Maximize;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<std::filesystem::path> srew;
    std::optional<std::filesystem::path> trew;
};

/// Throws Error(ParseError) on malformed lines. Blank and '#' lines are skipped.
std::vector<ManifestEntry> parse_manifest(std::string_view text, std::filesystem::path const& base_dir);
std::vector<ManifestEntry> read_manifest(std::filesystem::path const& path);

struct Variant {
    bool gauss_seidel = false;
    bool topological = false;
};

/// "plain", "gs", "topo" or "gs+topo"; throws Error(InvalidConfig).
Variant parse_variant(std::string_view text);

struct BenchOptions {
    std::vector<Method> methods{Method::SVI, Method::II};
    std::vector<Variant> variants{Variant{}};
    double epsilon = 1e-6;
    unsigned jobs = 1;
    std::uint64_t max_iterations = 50'000'000;
};

struct BenchRecord {
    std::string model;
    std::size_t states = 0;
    std::size_t choices = 0;
    std::size_t transitions = 0;
    Method method = Method::SVI;
    bool gauss_seidel = false;
    bool topological = false;
    Direction direction = Direction::Maximize;
    Objective objective = Objective::Probability;
    double epsilon = 0.0;
    double result = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    /// -1 for failed rows.
    std::int64_t iterations = 0;
    double time_ms = 0.0;
    std::optional<std::string> error;
};

/// Runs every entry x method x variant. Failures become rows with
/// iterations = -1 and an error message; the run continues.
std::vector<BenchRecord> bench_run(std::vector<ManifestEntry> const& entries, BenchOptions const& options);

/// Header plus one line per record, reals with 17 significant digits.
/// Failed rows carry a trailing "error:<message>" field.
std::string to_csv(std::vector<BenchRecord> const& records);
std::string csv_row(BenchRecord const& record);

/// Inverse of to_csv(); throws Error(MalformedCsv).
std::vector<BenchRecord> parse_csv(std::string_view text);

/// II-versus-SVI comparison per instance (model, variant, query, epsilon):
/// iteration and time ratios II/SVI, their geometric means and
/// scatter-ready "svi ii" columns for iterations and time.
std::string compare_report(std::vector<BenchRecord> const& records);

}  // namespace soundvi::tools
