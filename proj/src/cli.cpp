#include "carleman/cli.hpp"

#include "carleman/time_evolution.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <thread>

namespace carleman::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& message) {
    fail(ErrorKind::validation, field + ": " + message);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& object, const std::string& prefix, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : object.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) bad(join(prefix, key), "unknown key");
    }
}

const json& expect_object(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    return j;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) bad(field, "expected a number");
    return j.get<double>();
}

long integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) bad(field, "expected an integer");
    return j.get<long>();
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) bad(field, "expected a string");
    return j.get<std::string>();
}

template <class F>
void read_if(const json& object, const char* key, F&& assign) {
    if (auto it = object.find(key); it != object.end()) assign(*it);
}

// C-infinity bump on (a, b) with peak value 1.
double bump(double k, double a, double b) {
    if (k <= a || k >= b) return 0.0;
    const double y = (k - 0.5 * (a + b)) / (0.5 * (b - a));
    return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

bool finite(double v) { return std::isfinite(v); }

std::string num(double v) { return format_double(v); }

const char* const known_families = "exp, gamma, rational";

bool known_family(const std::string& name) { return name == "exp" || name == "gamma" || name == "rational"; }

using Rows = std::vector<std::vector<Cell>>;

Cell real(double v) { return {v, false}; }
Cell whole(long v) { return {static_cast<double>(v), true}; }

} // namespace

// --- names -------------------------------------------------------------------

std::string_view to_string(Command c) noexcept {
    switch (c) {
    case Command::resolvent: return "resolvent";
    case Command::density: return "density";
    case Command::evolve: return "evolve";
    case Command::scatter: return "scatter";
    case Command::count: return "count";
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
    for (Command c : {Command::resolvent, Command::density, Command::evolve, Command::scatter, Command::count})
        if (to_string(c) == name) return c;
    return std::nullopt;
}

std::optional<Format> parse_format(std::string_view name) noexcept {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    return std::nullopt;
}

std::string_view natural_variable(Command command) noexcept {
    switch (command) {
    case Command::scatter: return "k";
    case Command::evolve: return "T";
    case Command::resolvent:
    case Command::density:
    case Command::count: return "lambda";
    }
    return "?";
}

std::vector<std::string> columns_for(Command command) {
    switch (command) {
    case Command::resolvent: return {"lambda", "eta", "t", "s", "kernel_re", "kernel_im"};
    case Command::density: return {"lambda", "t", "s", "density"};
    case Command::evolve:
        return {"T", "t", "exact_re", "exact_im", "asymptotic_re", "asymptotic_im", "abs_error"};
    case Command::scatter:
        return {"k",      "coupling", "s11_re", "s11_im", "s12_re", "s12_im",
                "s21_re", "s21_im",   "s22_re", "s22_im", "unitarity_defect"};
    case Command::count: return {"lambda", "coupling", "count_bs", "count_direct", "bound", "w_norm_sq"};
    }
    return {};
}

// --- parsing -----------------------------------------------------------------

JobConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad("config", std::string("malformed JSON: ") + e.what());
    }
    expect_object(doc, "config");
    check_keys(doc, "",
               {"command", "grid", "kernel", "sweep", "at", "tolerances", "output", "side", "eta", "points", "state",
                "stride", "threads"});

    JobConfig c;
    read_if(doc, "command", [&](const json& j) {
        const std::string name = text(j, "command");
        c.command = parse_command(name);
        if (!c.command) bad("command", "unknown command '" + name + "'");
    });
    read_if(doc, "grid", [&](const json& j) {
        expect_object(j, "grid");
        check_keys(j, "grid", {"x_min", "x_max", "n"});
        read_if(j, "x_min", [&](const json& v) { c.grid.x_min = number(v, "grid.x_min"); });
        read_if(j, "x_max", [&](const json& v) { c.grid.x_max = number(v, "grid.x_max"); });
        read_if(j, "n", [&](const json& v) { c.grid.n = integer(v, "grid.n"); });
    });
    read_if(doc, "kernel", [&](const json& j) {
        expect_object(j, "kernel");
        read_if(j, "family", [&](const json& v) { c.kernel.family = text(v, "kernel.family"); });
        if (c.kernel.family == "gamma")
            check_keys(j, "kernel", {"family", "c", "a"});
        else if (c.kernel.family == "rational")
            check_keys(j, "kernel", {"family", "c", "p"});
        else if (c.kernel.family == "exp")
            check_keys(j, "kernel", {"family", "c"});
        read_if(j, "c", [&](const json& v) { c.kernel.c = number(v, "kernel.c"); });
        read_if(j, "a", [&](const json& v) { c.kernel.a = number(v, "kernel.a"); });
        read_if(j, "p", [&](const json& v) { c.kernel.p = number(v, "kernel.p"); });
    });
    read_if(doc, "sweep", [&](const json& j) {
        const json* values = &j;
        if (j.is_object()) {
            check_keys(j, "sweep", {"variable", "values"});
            read_if(j, "variable", [&](const json& v) { c.sweep_variable = text(v, "sweep.variable"); });
            auto it = j.find("values");
            if (it == j.end()) bad("sweep.values", "missing");
            values = &*it;
        }
        if (!values->is_array()) bad(j.is_object() ? "sweep.values" : "sweep", "expected an array of numbers");
        for (std::size_t i = 0; i < values->size(); ++i)
            c.sweep.push_back(number((*values)[i], "sweep.values[" + std::to_string(i) + "]"));
    });
    read_if(doc, "at", [&](const json& j) { c.at = number(j, "at"); });
    read_if(doc, "tolerances", [&](const json& j) {
        expect_object(j, "tolerances");
        check_keys(j, "tolerances", {"alpha", "condition_cap", "tail", "edge_margin"});
        read_if(j, "alpha", [&](const json& v) { c.tolerances.alpha = number(v, "tolerances.alpha"); });
        read_if(j, "condition_cap",
                [&](const json& v) { c.tolerances.condition_cap = number(v, "tolerances.condition_cap"); });
        read_if(j, "tail", [&](const json& v) { c.tolerances.tail = number(v, "tolerances.tail"); });
        read_if(j, "edge_margin",
                [&](const json& v) { c.tolerances.edge_margin = number(v, "tolerances.edge_margin"); });
    });
    read_if(doc, "output", [&](const json& j) {
        expect_object(j, "output");
        check_keys(j, "output", {"format", "path"});
        read_if(j, "format", [&](const json& v) {
            const std::string name = text(v, "output.format");
            const auto f = parse_format(name);
            if (!f) bad("output.format", "expected csv or json, got '" + name + "'");
            c.output.format = *f;
        });
        read_if(j, "path", [&](const json& v) { c.output.path = text(v, "output.path"); });
    });
    read_if(doc, "side", [&](const json& j) {
        const std::string name = text(j, "side");
        if (name == "plus")
            c.side = Side::plus;
        else if (name == "minus")
            c.side = Side::minus;
        else
            bad("side", "expected plus or minus, got '" + name + "'");
    });
    read_if(doc, "eta", [&](const json& j) { c.eta = number(j, "eta"); });
    read_if(doc, "points", [&](const json& j) {
        if (!j.is_array()) bad("points", "expected an array of [t, s] pairs");
        c.points.clear();
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string field = "points[" + std::to_string(i) + "]";
            if (!j[i].is_array() || j[i].size() != 2) bad(field, "expected [t, s]");
            c.points.emplace_back(number(j[i][0], field + "[0]"), number(j[i][1], field + "[1]"));
        }
    });
    read_if(doc, "state", [&](const json& j) {
        expect_object(j, "state");
        check_keys(j, "state", {"k_min", "k_max"});
        read_if(j, "k_min", [&](const json& v) { c.state.k_min = number(v, "state.k_min"); });
        read_if(j, "k_max", [&](const json& v) { c.state.k_max = number(v, "state.k_max"); });
    });
    read_if(doc, "stride", [&](const json& j) { c.stride = integer(j, "stride"); });
    read_if(doc, "threads", [&](const json& j) { c.threads = static_cast<int>(integer(j, "threads")); });
    return c;
}

JobConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(ErrorKind::io, "cannot read config '" + path + "'");
    return parse_config(buffer.str());
}

// --- validation --------------------------------------------------------------

std::vector<Diagnostic> validate(const JobConfig& c) {
    std::vector<Diagnostic> out;
    auto flag = [&](std::string field, std::string message) { out.push_back({std::move(field), std::move(message)}); };

    if (!c.command) flag("command", "missing");

    if (!finite(c.grid.x_min) || !finite(c.grid.x_max) || c.grid.x_max <= c.grid.x_min)
        flag("grid.x_max", "window must be finite with x_max > x_min");
    if (c.grid.n < 64) flag("grid.n", "grid too small: n = " + std::to_string(c.grid.n) + " < 64");

    const KernelSpec& k = c.kernel;
    const double alpha = c.tolerances.alpha;
    if (!known_family(k.family)) {
        flag("kernel.family", "unknown family '" + k.family + "' (known: " + known_families + ")");
    } else {
        if (!finite(k.c)) flag("kernel.c", "must be finite");
        if (k.family == "gamma" && !(k.a > -1.0))
            flag("kernel.a", "a = " + num(k.a) + " violates the weighted decay condition |v|^2 <ln t>^{4 alpha} t "
                             "integrable at t -> 0 (needs a > -1)");
        if (k.family == "rational" && !(k.p > 1.0))
            flag("kernel.p", "p = " + num(k.p) + " too small for alpha = " + num(alpha) +
                                 ": |v|^2 <ln t>^{4 alpha} t is not integrable at infinity and v is not o(1/t) "
                                 "(needs p > 1)");
    }

    if (!(c.tolerances.condition_cap > 1.0)) flag("tolerances.condition_cap", "must exceed 1");
    if (!(c.tolerances.tail > 0.0)) flag("tolerances.tail", "must be positive");
    if (!(c.tolerances.edge_margin > 0.0 && c.tolerances.edge_margin < 0.5 * pi))
        flag("tolerances.edge_margin", "must lie in (0, pi/2)");
    if (!(c.stride >= 1)) flag("stride", "must be at least 1");
    if (!(c.threads >= 1 && c.threads <= 256)) flag("threads", "must lie in [1, 256]");

    if (!c.command) return out;
    const Command cmd = *c.command;

    if (cmd == Command::count) {
        if (!(alpha > 1.5)) flag("tolerances.alpha", "the eigenvalue bound needs alpha > 3/2");
        if (known_family(k.family) && k.c < 0.0 && c.sweep_variable != "coupling")
            flag("kernel.c", "counting needs a positive semidefinite kernel (c >= 0)");
        if (k.family == "gamma" && k.a > 0.0)
            flag("kernel.a", "t^a e^{-t} with a > 0 is not a positive semidefinite Hankel kernel");
    }

    const bool coupling = c.sweep_variable == "coupling";
    if (!c.sweep_variable.empty() && !coupling && c.sweep_variable != natural_variable(cmd))
        flag("sweep.variable", "'" + c.sweep_variable + "' is not a sweep variable of " + std::string(to_string(cmd)) +
                                   " (use " + std::string(natural_variable(cmd)) + " or coupling)");
    if (coupling) {
        if (cmd != Command::scatter && cmd != Command::count)
            flag("sweep.variable", "coupling sweeps apply to scatter and count only");
        if (!c.at)
            flag("at", "a coupling sweep needs a fixed " + std::string(natural_variable(cmd)));
        else if (cmd == Command::scatter && !(*c.at > 0.0 && finite(*c.at)))
            flag("at", "k must be positive");
        else if (cmd == Command::count && !(*c.at > pi && finite(*c.at)))
            flag("at", "lambda must exceed pi");
    }

    for (std::size_t i = 0; i < c.sweep.size(); ++i) {
        const double v = c.sweep[i];
        const std::string field = "sweep.values[" + std::to_string(i) + "]";
        if (!finite(v)) {
            flag(field, "must be finite");
            continue;
        }
        if (coupling) {
            if (cmd == Command::count && v < 0.0) flag(field, "counting needs coupling >= 0");
            continue;
        }
        switch (cmd) {
        case Command::scatter:
            if (!(v > 0.0)) flag(field, "k must be positive");
            break;
        case Command::count:
            if (!(v > pi)) flag(field, "lambda must exceed pi");
            break;
        case Command::density:
            if (!(v > 0.0 && v < pi)) flag(field, "lambda must lie in (0, pi)");
            break;
        case Command::resolvent:
            if (c.eta == 0.0 && v == 0.0) flag(field, "lambda = 0 is a branch point");
            break;
        case Command::evolve:
            if (!(std::abs(v) >= min_asymptotic_time))
                flag(field, "|T| must be at least " + num(min_asymptotic_time));
            break;
        }
    }

    if (cmd == Command::resolvent && !finite(c.eta)) flag("eta", "must be finite");
    if (cmd == Command::resolvent || cmd == Command::density) {
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            const auto [t, s] = c.points[i];
            if (!(t > 0.0 && s > 0.0 && finite(t) && finite(s)))
                flag("points[" + std::to_string(i) + "]", "t and s must be positive and finite");
        }
    }
    if (cmd == Command::evolve) {
        const auto [a, b] = c.state;
        if (!(a > 0.0 && b > a && finite(b)))
            flag("state", "need 0 < k_min < k_max");
        else if (a <= k_zero && k_zero <= b)
            flag("state", "the spectral support must avoid k_0 = " + num(k_zero));
    }
    return out;
}

// --- kernels -----------------------------------------------------------------

PerturbationKernel make_kernel(const KernelSpec& spec) {
    if (!known_family(spec.family)) bad("kernel.family", "unknown family '" + spec.family + "'");
    const double c = spec.c;
    if (c == 0.0) return PerturbationKernel::zero();
    if (spec.family == "exp") return PerturbationKernel::hankel([c](double t) { return c * std::exp(-t); });
    if (spec.family == "gamma") {
        const double a = spec.a;
        return PerturbationKernel::hankel([c, a](double t) { return c * std::exp(a * std::log(t) - t); });
    }
    const double p = spec.p;
    return PerturbationKernel::hankel([c, p](double t) { return c * std::exp(-p * std::log1p(t)); });
}

// --- running -----------------------------------------------------------------

Table run(const JobConfig& config) {
    require(config.command.has_value(), ErrorKind::validation, "command: missing");
    const Command cmd = *config.command;
    const LogGrid grid(config.grid.x_min, config.grid.x_max, static_cast<std::size_t>(config.grid.n));
    const bool coupling = config.sweep_variable == "coupling";

    auto kernel_for = [&](double v) {
        KernelSpec spec = config.kernel;
        if (coupling) spec.c = v;
        return make_kernel(spec);
    };
    auto point_for = [&](double v) { return coupling ? *config.at : v; };

    // Shared read-only state for evolve.
    VectorC state;
    std::optional<MellinSpectrum> spectrum;
    if (cmd == Command::evolve && !config.sweep.empty()) {
        const double a = config.state.k_min;
        const double b = config.state.k_max;
        state = synthesize_state(grid, [a, b](double k) { return cplx(bump(k, a, b)); });
        spectrum.emplace(mellin_forward(grid, state));
    }

    auto evaluate = [&](double v) -> Rows {
        Rows rows;
        switch (cmd) {
        case Command::scatter: {
            const double k = point_for(v);
            const PerturbationKernel kernel = kernel_for(v);
            LippmannSchwingerOptions options;
            options.condition_cap = config.tolerances.condition_cap;
            options.tail_tolerance = config.tolerances.tail;
            const ScatteringMatrix s = scattering_matrix(solve_lippmann_schwinger(kernel, k, grid, options), kernel);
            rows.push_back({real(k), real(coupling ? v : config.kernel.c), real(s.s11.real()), real(s.s11.imag()),
                            real(s.s12.real()), real(s.s12.imag()), real(s.s21.real()), real(s.s21.imag()),
                            real(s.s22.real()), real(s.s22.imag()), real(s.unitarity_defect)});
            break;
        }
        case Command::count: {
            const BirmanSchwingerReport r =
                birman_schwinger_report(kernel_for(v), point_for(v), grid, config.tolerances.alpha);
            rows.push_back({real(r.lambda), real(coupling ? v : config.kernel.c), whole(r.count_bs),
                            whole(r.count_direct), real(r.bound_N), real(r.w_norm_sq)});
            break;
        }
        case Command::resolvent: {
            SpectralPoint z = config.eta != 0.0  ? SpectralPoint::off_cut(cplx(v, config.eta))
                              : std::abs(v) <= pi ? SpectralPoint::boundary(v, config.side)
                                                  : SpectralPoint::off_cut(v);
            if (z.is_boundary()) {
                const double margin = config.tolerances.edge_margin;
                require(std::abs(v) >= margin && std::abs(v) <= pi - margin, ErrorKind::edge,
                        "lambda = " + num(v) + " is within the edge margin of 0 or pi");
            }
            for (auto [t, s] : config.points) {
                const cplx a = resolvent_kernel(t, s, z);
                rows.push_back({real(v), real(config.eta), real(t), real(s), real(a.real()), real(a.imag())});
            }
            break;
        }
        case Command::density:
            for (auto [t, s] : config.points)
                rows.push_back({real(v), real(t), real(s), real(spectral_density(t, s, v))});
            break;
        case Command::evolve: {
            const VectorC exact = propagate_exact(grid, state, v);
            const StationaryPhaseField field = stationary_phase_on_grid(grid, *spectrum, v);
            for (std::size_t i = 0; i < grid.size(); i += static_cast<std::size_t>(config.stride)) {
                const double t = grid.t(i);
                if (!field.reliable[i] || std::abs(tau_of(t, v)) >= 1.0) continue;
                const cplx e = exact[i];
                const cplx u = field.u1[i] + field.u2[i];
                rows.push_back({real(v), real(t), real(e.real()), real(e.imag()), real(u.real()), real(u.imag()),
                                real(std::abs(e - u))});
            }
            break;
        }
        }
        return rows;
    };

    const std::size_t m = config.sweep.size();
    std::vector<Rows> results(m);
    std::vector<std::exception_ptr> errors(m);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < m; i = next++) {
            try {
                results[i] = evaluate(config.sweep[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(config.threads, 1)), m);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    // The first failure in sweep order, independent of scheduling.
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    Table table;
    table.command = cmd;
    table.columns = columns_for(cmd);
    for (auto& rows : results)
        for (auto& row : rows) table.rows.push_back(std::move(row));
    return table;
}

// --- output ------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

std::string format_cell(const Cell& c) {
    if (!c.integer) return format_double(c.value);
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(c.value));
    return std::string(buf, r.ptr);
}

} // namespace

std::string format_csv(const Table& table) {
    std::string out = "# " + std::string(schema_version) + " command=" + std::string(to_string(table.command)) + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
        out += "\n";
    }
    return out;
}

std::string format_json(const Table& table) {
    std::string out = "{\"schema\":" + json(schema_version).dump() +
                      ",\"command\":" + json(to_string(table.command)).dump() + ",\"columns\":[";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + json(table.columns[i]).dump();
    out += "],\"rows\":[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += r ? ",\n[" : "\n[";
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += std::isfinite(row[i].value) ? format_cell(row[i]) : "null";
        }
        out += "]";
    }
    out += table.rows.empty() ? "]}\n" : "\n]}\n";
    return out;
}

// --- entry point -------------------------------------------------------------

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::io: return 4;
    default: return 3;
    }
}

std::string error_line(ErrorKind kind, std::string_view message) {
    return json{{"error",
                 {{"code", exit_code(kind)}, {"kind", std::string(carleman::to_string(kind))},
                  {"message", std::string(message)}}}}
        .dump();
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral and scattering computations for the Carleman operator", "carleman-scatter"};
    std::string command;
    std::string config_path;
    std::string out_path;
    std::string format;
    app.add_option("command", command, "resolvent | density | evolve | scatter | count")->required();
    app.add_option("--config", config_path, "JSON job file")->required();
    app.add_option("--out", out_path, "output file (default: config output.path, else stdout)");
    app.add_option("--format", format, "csv | json");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_line(ErrorKind::validation, std::string("arguments: ") + e.what()) << "\n";
        return 2;
    }

    try {
        const auto cmd = parse_command(command);
        if (!cmd) bad("command", "unknown command '" + command + "'");
        std::optional<Format> fmt;
        if (!format.empty()) {
            fmt = parse_format(format);
            if (!fmt) bad("format", "expected csv or json, got '" + format + "'");
        }

        JobConfig config = load_config(config_path);
        if (config.command && *config.command != *cmd)
            bad("command", "config declares " + std::string(to_string(*config.command)) + " but the command line asks for " +
                               command);
        config.command = cmd;
        if (!out_path.empty()) config.output.path = out_path;
        if (fmt) config.output.format = *fmt;

        const auto diagnostics = validate(config);
        if (!diagnostics.empty()) {
            std::string message;
            for (const auto& d : diagnostics) message += (message.empty() ? "" : "; ") + d.field + ": " + d.message;
            err << error_line(ErrorKind::validation, message) << "\n";
            return 2;
        }

        const Table table = run(config);
        const std::string body = config.output.format == Format::csv ? format_csv(table) : format_json(table);
        if (config.output.path.empty()) {
            out << body;
            out.flush();
            if (!out) fail(ErrorKind::io, "cannot write to standard output");
        } else {
            std::ofstream file(config.output.path, std::ios::binary | std::ios::trunc);
            if (!file) fail(ErrorKind::io, "cannot open output '" + config.output.path + "'");
            file << body;
            file.close();
            if (!file) fail(ErrorKind::io, "cannot write output '" + config.output.path + "'");
        }
        return 0;
    } catch (const Error& e) {
        err << error_line(e.kind(), e.what()) << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << json{{"error", {{"code", 3}, {"kind", "internal"}, {"message", e.what()}}}}.dump() << "\n";
        return 3;
    }
}

} // namespace carleman::cli
