#pragma once

// Declarative jobs for the carleman-scatter command-line tool.
//
// A job is a single JSON document:
//
//   {
//     "command": "scatter",                      // optional; must match the command-line argument
//     "grid": {"x_min": -40, "x_max": 40, "n": 512},
//     "kernel": {"family": "exp", "c": 0.1},
//     "sweep": {"variable": "k", "values": [0.25, 0.5, 1.0]},   // or a bare array
//     "tolerances": {"alpha": 2, "condition_cap": 1e10, "tail": 1e-6, "edge_margin": 1e-6},
//     "output": {"format": "csv", "path": "s.csv"},
//     "threads": 1
//   }
//
// Command-specific keys: "at" (fixed k or lambda for a coupling sweep),
// "side" ("plus" | "minus", resolvent boundary values), "eta" (imaginary part
// of z for resolvent), "points" (list of [t, s] for resolvent and density),
// "state" ({"k_min", "k_max"} spectral bump for evolve) and "stride" (row
// thinning for evolve). Evolve reports the unitary samples sqrt(t) f(t) on
// grid points inside the stationary-phase window.
//
// Kernel families, all Hankel kernels v(t + s):
//   exp       c e^{-t}                     every weighted decay condition, any alpha;
//                                          positive semidefinite for c >= 0.
//   gamma     c t^a e^{-t}, a > -1         weighted decay at t -> 0 needs a > -1;
//                                          positive semidefinite for c >= 0 and a <= 0.
//   rational  c (1 + t)^{-p}               |v|^2 <ln t>^{4 alpha} t integrable and
//                                          v = o(1/t) both need p > 1, for every alpha;
//                                          positive semidefinite for c >= 0.

#include "carleman/discrete_spectrum.hpp"
#include "carleman/error.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace carleman::cli {

inline constexpr std::string_view schema_version = "carleman-scatter/1";

enum class Command { resolvent, density, evolve, scatter, count };
enum class Format { csv, json };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;
std::optional<Format> parse_format(std::string_view name) noexcept;

struct GridSpec {
    double x_min = -40.0;
    double x_max = 40.0;
    long n = 512;
};

struct KernelSpec {
    std::string family = "exp";
    double c = 1.0;
    double a = 0.0; // gamma
    double p = 2.0; // rational
};

struct Tolerances {
    double alpha = 2.0;
    double condition_cap = 1e10;
    double tail = 1e-6;
    double edge_margin = default_edge_margin;
};

struct OutputSpec {
    Format format = Format::csv;
    std::string path; // empty: standard output
};

struct EvolveState {
    double k_min = 0.35;
    double k_max = 0.9;
};

struct JobConfig {
    // Unset until given in the document or on the command line.
    std::optional<Command> command;
    GridSpec grid;
    KernelSpec kernel;
    // Empty, the command's own variable (k, lambda or T) or "coupling".
    std::string sweep_variable;
    std::vector<double> sweep;
    std::optional<double> at;
    Tolerances tolerances;
    OutputSpec output;
    Side side = Side::plus;
    double eta = 0.0;
    std::vector<std::pair<double, double>> points{{2.0, 1.0}};
    EvolveState state;
    long stride = 16;
    int threads = 1;
};

struct Diagnostic {
    std::string field;
    std::string message;
};

// Parses a JSON document. Structural problems (wrong types, unknown keys)
// throw a validation error naming the field; value ranges are left to
// validate().
JobConfig parse_config(std::string_view json_text);
JobConfig load_config(const std::string& path);

// Every violated invariant, empty when the job can run.
std::vector<Diagnostic> validate(const JobConfig& config);

// Throws validation for an unknown family. c = 0 gives the exact zero kernel.
PerturbationKernel make_kernel(const KernelSpec& spec);

struct Cell {
    double value = 0.0;
    bool integer = false;
};

struct Table {
    Command command = Command::scatter;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::vector<std::string> columns_for(Command command);

// Name of the variable a plain sweep runs over.
std::string_view natural_variable(Command command) noexcept;

// Runs a validated job. Rows come out in sweep order whatever the thread count.
Table run(const JobConfig& config);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);
std::string format_csv(const Table& table);
std::string format_json(const Table& table);

// 0 ok, 2 validation, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind) noexcept;

// Single-line JSON error record.
std::string error_line(ErrorKind kind, std::string_view message);

// Full tool entry point; returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace carleman::cli
