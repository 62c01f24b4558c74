#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "busy_cycle.hpp"
#include "busy_period.hpp"
#include "errors.hpp"
#include "service_law.hpp"
#include "simulator.hpp"
#include "text_io.hpp"
#include "validation.hpp"

namespace mginf {
namespace cli_detail {

using nlohmann::json;

struct ParamOpts {
    double lambda = 1.0;
    double rho = 1.0;
    double p = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    std::string beta_table;
    CLI::Option* p_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* eta_opt = nullptr;
    CLI::Option* table_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "arrival rate (> 0)");
        cmd->add_option("--rho", rho, "traffic intensity (> 0)");
        p_opt = cmd->add_option("--p", p, "initial-jump weight in [0, 1)");
        beta_opt = cmd->add_option("--beta", beta, "constant surface drift");
        eta_opt = cmd->add_option("--eta", eta, "constant canonical drift (excludes --p/--beta)");
        table_opt = cmd->add_option("--beta-table", beta_table, "CSV file of (t, beta) knots");
    }

    QueueParams build() const {
        const bool eta_given = eta_opt->count() > 0;
        const bool beta_given = beta_opt->count() > 0;
        const bool p_given = p_opt->count() > 0;
        const bool table_given = table_opt->count() > 0;
        if (eta_given && (p_given || beta_given || table_given))
            throw usage_error("--eta is mutually exclusive with --p, --beta, and --beta-table");
        if (table_given && beta_given) throw usage_error("--beta and --beta-table are mutually exclusive");
        QueueParams q;
        q.lambda = lambda;
        q.rho = rho;
        if (table_given) {
            TabulatedBeta tb;
            tb.knots = load_beta_table(beta_table);
            q.p = p;
            q.beta = std::move(tb);
        } else if (eta_given) {
            q.p = 0.0;
            q.beta = ConstantBeta{eta};
        } else {
            q.p = p;
            q.beta = ConstantBeta{beta};
        }
        return q;
    }
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_text(const json& c) {
    if (c.is_null()) return "";
    if (c.is_string()) return csv_escape(c.get<std::string>());
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    if (c.is_number_unsigned()) return std::to_string(c.get<unsigned long long>());
    return format_double(c.get<double>());
}

inline std::string render_table(const std::vector<std::string>& columns, const std::vector<std::vector<json>>& rows,
                                const json& footer, bool as_json) {
    if (as_json) {
        json j;
        j["columns"] = columns;
        j["rows"] = rows;
        if (!footer.is_null()) j["footer"] = footer;
        return j.dump(2) + "\n";
    }
    std::string out = csv_row(columns);
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (const auto& c : row) cells.push_back(cell_text(c));
        out += csv_row(cells);
    }
    if (!footer.is_null())
        for (const auto& [key, value] : footer.items()) out += csv_row({"footer", key, cell_text(value)});
    return out;
}

inline void deliver(const std::string& payload, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw usage_error("cannot open output file: " + out_path);
    f << payload;
    f.flush();
    if (!f) throw usage_error("failed writing output file: " + out_path);
}

inline std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("MGINF_SEED")) {
        const std::string_view sv(env);
        std::uint64_t v = 0;
        const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
            throw usage_error("MGINF_SEED must be an unsigned integer");
        return v;
    }
    return flag_value;
}

struct EvalFlags {
    std::string target = "G";
    std::string method;
    double t_max = 10.0;
    int steps = 101;
};

inline int run_eval(const ServiceLaw& law, const EvalFlags& f, bool as_json, const std::string& out_path,
                    std::ostream& out) {
    if (!(f.t_max > 0)) throw usage_error("--t-max must be positive");
    if (f.steps < 2) throw usage_error("--steps must be at least 2");
    const bool known = f.target == "G" || f.target == "g" || f.target == "B" || f.target == "Z" ||
                       f.target == "R" || f.target == "bounds";
    if (!known) throw usage_error("--target must be one of G, g, B, Z, R, bounds");

    std::string method = f.method;
    if (method.empty()) method = law.constant_drift() ? "closed" : "general";
    if (method != "closed" && method != "general" && method != "both")
        throw usage_error("--method must be closed, general, or both");

    const double lam = law.lambda();
    const double rho = law.rho();
    const double step = f.t_max / (f.steps - 1);
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json footer;

    if (f.target == "bounds") {
        columns = {"t", "busy_lower", "cycle_lower", "cycle_upper"};
        for (int k = 0; k < f.steps; ++k) {
            const double t = k * step;
            const auto [lo, hi] = bc_bounds(lam, rho, t);
            rows.push_back({t, bp_lower_bound(lam, rho, t), lo, hi});
        }
        deliver(render_table(columns, rows, footer, as_json), out_path, out);
        return 0;
    }

    const bool want_closed = method == "closed" || method == "both";
    const bool want_general = method == "general" || method == "both";
    if (want_closed && !law.constant_drift())
        throw usage_error("closed-form evaluation requires constant drift; use --method general");

    const BusyPeriodLaw bp(law);
    const BusyCycleLaw bc(law);
    std::optional<GridFunction> grid;
    std::optional<RenewalNumeric> rn;
    std::function<double(double)> eval_closed, eval_general;

    if (f.target == "G") {
        eval_closed = [&law](double t) { return law.cdf(t); };
        eval_general = [&law](double t) { return law.cdf_numeric(t); };
    } else if (f.target == "g") {
        eval_closed = [&law](double t) { return law.pdf(t); };
        eval_general = [&law](double t) {
            const double h = std::min(6e-6 * (1.0 + t), t / 2);
            return (law.cdf_numeric(t + h) - law.cdf_numeric(t - h)) / (2 * h);
        };
    } else if (f.target == "B" || f.target == "Z") {
        eval_closed = [&bp, &bc, target = f.target](double t) {
            return target == "B" ? bp.cdf_closed(t) : bc.cdf_closed(t);
        };
        if (want_general) {
            const double dt = default_grid_step(law);
            grid = f.target == "B" ? bp_cdf_general(law, f.t_max, dt).grid : bc_cdf_general(law, f.t_max, dt).grid;
            eval_general = [&grid](double t) { return grid->interpolate(t); };
        }
    } else {  // R
        eval_closed = [&law](double t) { return renewal_closed(law, t); };
        if (want_general) {
            rn.emplace(law);
            eval_general = [&rn](double t) { return (*rn)(t); };
        }
    }

    columns = {"t"};
    if (method == "both") {
        columns.push_back("closed");
        columns.push_back("general");
    } else {
        columns.push_back("value");
    }
    double sup_diff = 0;
    const int k0 = f.target == "g" ? 1 : 0;  // density undefined at the t = 0 atom
    for (int k = k0; k < f.steps; ++k) {
        const double t = k * step;
        std::vector<json> row{t};
        double c = 0, g = 0;
        if (want_closed) {
            c = eval_closed(t);
            row.push_back(c);
        }
        if (want_general) {
            g = eval_general(t);
            row.push_back(g);
        }
        if (method == "both") sup_diff = std::max(sup_diff, std::abs(c - g));
        rows.push_back(std::move(row));
    }
    if (method == "both") footer = json{{"sup_diff", sup_diff}};
    deliver(render_table(columns, rows, footer, as_json), out_path, out);
    return 0;
}

struct MomentFlags {
    std::string which = "B";
    std::string method;
    int n_max = 1;
    int m = 2048;
};

inline int run_moments(const ServiceLaw& law, const MomentFlags& f, bool as_json, const std::string& out_path,
                       std::ostream& out) {
    if (f.n_max < 1) throw usage_error("--n-max must be at least 1");
    if (f.which != "T" && f.which != "B" && f.which != "Z") throw usage_error("--which must be T, B, or Z");

    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    if (f.which == "B" || f.which == "Z") {
        if (!f.method.empty() && f.method != "recursion")
            throw usage_error("busy-period and busy-cycle moments use the recursion method only");
        const BusyPeriodLaw bp(law);
        MomentTable table;
        if (f.which == "B") {
            table = bp.moments(f.n_max);
        } else {
            const BusyCycleLaw bc(law);
            table = bc.moments(f.n_max);
        }
        columns = {"n", "value", "method"};
        for (int n = 1; n <= f.n_max; ++n)
            rows.push_back({n, table.values[static_cast<std::size_t>(n - 1)], "recursion"});
        deliver(render_table(columns, rows, json{}, as_json), out_path, out);
        return 0;
    }

    std::string method = f.method.empty() ? "quadrature" : f.method;
    ServiceLaw::MomentMethod mm = ServiceLaw::MomentMethod::quadrature;
    if (method == "series") {
        if (!law.constant_drift()) throw usage_error("the series method requires constant drift");
        if (!(law.rho() < std::log(2.0)))
            throw usage_error("the series method requires rho < ln 2; use quadrature or discretized");
        mm = ServiceLaw::MomentMethod::series;
    } else if (method == "discretized") {
        if (f.m < 4) throw usage_error("--m must be at least 4");
        mm = ServiceLaw::MomentMethod::discretized;
    } else if (method != "quadrature") {
        throw usage_error("--method must be quadrature, series, or discretized");
    }

    const bool with_bounds = law.constant_drift() && !law.degenerate();
    columns = {"n", "value", "method"};
    if (method == "series") columns.push_back("truncation");
    if (method == "discretized") columns.push_back("m");
    if (with_bounds) {
        columns.push_back("bound_lower");
        columns.push_back("bound_upper");
    }
    for (int n = 1; n <= f.n_max; ++n) {
        const auto r = law.moment(n, mm, f.m);
        std::vector<json> row{n, r.value, method};
        if (method == "series") row.push_back(r.truncation);
        if (method == "discretized") row.push_back(f.m);
        if (with_bounds) {
            const auto [lo, hi] = law.moment_bounds(n);
            row.push_back(lo);
            row.push_back(hi);
        }
        rows.push_back(std::move(row));
    }
    deliver(render_table(columns, rows, json{}, as_json), out_path, out);
    return 0;
}

inline int run_peaks(const ServiceLaw& law, bool as_json, const std::string& out_path, std::ostream& out) {
    const BusyPeriodLaw bp(law);
    const BusyCycleLaw bc(law);
    const bool closed = law.constant_drift() && !law.degenerate();
    const PeakPair b = closed ? bp.peak() : bp.peak_numeric();
    const PeakPair z = closed ? bc.peak() : bc.peak_numeric();
    std::vector<std::vector<json>> rows{{"pi", b.pi}, {"qi", b.qi}, {"pi_prime", z.pi}, {"qi_prime", z.qi}};
    if (closed) {
        rows.push_back({"pi_parametric", bp.peak_parametric()});
        rows.push_back({"pi_prime_parametric", bc.peak_parametric()});
    }
    deliver(render_table({"quantity", "value"}, rows, json{}, as_json), out_path, out);
    return 0;
}

struct SimulateFlags {
    std::uint64_t seed = 0;
    std::size_t n_cycles = 10000;
    int replications = 0;
    double horizon = 0;
    std::string start = "empty";
    std::string dump_prefix;
    const CLI::Option* seed_opt = nullptr;
    const CLI::Option* horizon_opt = nullptr;
};

inline int run_simulate(const ServiceLaw& law, const SimulateFlags& f, const std::string& out_path,
                        std::ostream& out) {
    if (f.n_cycles < 1) throw usage_error("--n-cycles must be at least 1");
    if (f.replications < 0) throw usage_error("--replications must be nonnegative");
    if (f.start != "empty" && f.start != "arrival") throw usage_error("--start must be empty or arrival");
    const double lam = law.lambda();
    const double rho = law.rho();
    double horizon = 10.0 / lam;
    if (f.horizon_opt->count() > 0) {
        if (!(f.horizon > 0)) throw usage_error("--horizon must be positive");
        horizon = f.horizon;
    }
    const std::uint64_t seed = resolve_seed(f.seed_opt, f.seed);

    SimConfig config;
    config.law = law;
    config.seed = seed;
    config.n_cycles = f.n_cycles;
    config.renewal_horizon = horizon;
    config.n_replications = std::max(f.replications, 1);
    config.start_mode = f.start == "arrival" ? StartMode::arrival_at_zero : StartMode::empty_at_zero;
    const SimResult sim = run_busy_cycles(config);

    const auto n = static_cast<double>(sim.busy_samples.size());
    double mean_b = 0, mean_z = 0;
    std::size_t zeros = 0;
    for (double b : sim.busy_samples) {
        mean_b += b;
        if (b == 0) ++zeros;
    }
    for (double z : sim.cycle_samples) mean_z += z;
    mean_b /= n;
    mean_z /= n;

    json j;
    j["seed_echo"] = sim.seed_echo;
    j["n_cycles"] = sim.busy_samples.size();
    j["empirical_mean_B"] = mean_b;
    j["empirical_mean_Z"] = mean_z;
    j["atom_fraction_B"] = static_cast<double>(zeros) / n;
    j["model_mean_B"] = std::expm1(rho) / lam;
    j["model_mean_Z"] = std::expm1(rho) / lam + 1.0 / lam;
    j["model_atom"] = law.atom();
    if (law.constant_drift()) {
        const BusyPeriodLaw bp(law);
        const BusyCycleLaw bc(law);
        j["ks_B"] = ks_distance(EmpiricalCdf(sim.busy_samples), [&bp](double t) { return bp.cdf_closed(t); });
        j["ks_Z"] = ks_distance(EmpiricalCdf(sim.cycle_samples), [&bc](double t) { return bc.cdf_closed(t); });
        j["dkw_99"] = std::sqrt(std::log(200.0) / (2.0 * n));
    }

    SimResult counts;
    if (f.replications > 0) {
        SimConfig rconfig = config;
        rconfig.start_mode = StartMode::arrival_at_zero;
        counts = run_renewal_counts(rconfig);
        const RenewalNumeric rn(law);
        json renewal;
        renewal["replications"] = f.replications;
        renewal["horizon"] = horizon;
        renewal["times"] = counts.renewal_times;
        json means = json::array(), model = json::array();
        const auto reps = static_cast<double>(counts.renewal_counts.size());
        for (std::size_t k = 0; k < counts.renewal_times.size(); ++k) {
            double m = 0;
            for (const auto& rep : counts.renewal_counts) m += rep[k];
            means.push_back(m / reps);
            const double t = counts.renewal_times[k];
            model.push_back(law.constant_drift() || law.degenerate() ? renewal_closed(law, t) : rn(t));
        }
        renewal["mean_counts"] = means;
        renewal["model"] = model;
        j["renewal"] = renewal;
    }

    if (!f.dump_prefix.empty()) {
        auto open = [](const std::string& path) {
            std::ofstream file(path, std::ios::binary);
            if (!file) throw usage_error("cannot open output file: " + path);
            return file;
        };
        {
            auto fb = open(f.dump_prefix + "_busy.txt");
            write_sample_lines(fb, sim.busy_samples);
            auto fz = open(f.dump_prefix + "_cycle.txt");
            write_sample_lines(fz, sim.cycle_samples);
        }
        if (f.replications > 0) {
            auto fr = open(f.dump_prefix + "_renewal.csv");
            fr << csv_row({"replication", "t", "count"});
            for (std::size_t r = 0; r < counts.renewal_counts.size(); ++r)
                for (std::size_t k = 0; k < counts.renewal_times.size(); ++k)
                    fr << csv_row({std::to_string(r), format_double(counts.renewal_times[k]),
                                   std::to_string(counts.renewal_counts[r][k])});
        }
    }

    deliver(j.dump(2) + "\n", out_path, out);
    return 0;
}

inline int run_validate(const QueueParams& params, Budget budget, std::uint64_t seed, bool as_json,
                        const std::string& out_path, std::ostream& out) {
    const ValidationReport report = run_validation(params, budget, seed);
    std::string payload;
    if (as_json) {
        payload = to_json(report).dump(2) + "\n";
    } else {
        payload = csv_row({"name", "kind", "lhs", "rhs", "tolerance", "pass"});
        for (const auto& row : report.checks)
            payload += csv_row({row.name, row.kind, format_double(row.lhs), format_double(row.rhs),
                                format_double(row.tolerance), row.pass ? "true" : "false"});
        payload += "\n";
        payload += csv_row({"site", "printed_value", "computed_value", "note"});
        for (const auto& flag : report.paper_flags)
            payload += csv_row({flag.site, format_double(flag.printed_value), format_double(flag.computed_value),
                                csv_escape(flag.note)});
    }
    deliver(payload, out_path, out);
    return report.overall_pass ? 0 : 3;
}

struct SweepFlags {
    std::vector<double> lambdas{1.0};
    std::vector<double> rhos{1.0};
    std::vector<double> etas{0.0};
};

inline int run_sweep(const SweepFlags& f, bool as_json, const std::string& out_path, std::ostream& out) {
    if (f.lambdas.empty() || f.rhos.empty() || f.etas.empty())
        throw usage_error("sweep lists must be nonempty");
    std::vector<std::vector<json>> rows;
    for (double lam : f.lambdas)
        for (double rho : f.rhos)
            for (double eta : f.etas) {
                const ServiceLaw law = ServiceLaw::canonicalize({lam, rho, 0.0, ConstantBeta{eta}});
                const BusyPeriodLaw bp(law);
                const BusyCycleLaw bc(law);
                const bool closed = !law.degenerate();
                const PeakPair b = closed ? bp.peak() : bp.peak_numeric();
                const PeakPair z = closed ? bc.peak() : bc.peak_numeric();
                const double mean_b = std::expm1(rho) / lam;
                const std::vector<std::pair<std::string, double>> quantities{
                    {"atom", law.atom()},           {"pi", b.pi},
                    {"qi", b.qi},                   {"pi_prime", z.pi},
                    {"qi_prime", z.qi},             {"mean_busy", mean_b},
                    {"mean_cycle", mean_b + 1.0 / lam}};
                for (const auto& [name, value] : quantities) rows.push_back({lam, rho, eta, name, value});
            }
    deliver(render_table({"lambda", "rho", "eta", "quantity", "value"}, rows, json{}, as_json), out_path, out);
    return 0;
}

}  // namespace cli_detail

// Entry point shared by the binary and the in-process tests. `args` excludes
// the program name. Returns the process exit code: 0 success, 2 usage or
// constraint error, 3 validation failure, 4 numeric non-convergence.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    namespace cd = cli_detail;
    CLI::App app{"busy-period and busy-cycle toolkit for the M|G|infinity queue"};
    app.name("mginf");
    app.require_subcommand(1);

    std::string format = "csv";
    std::string out_path;
    app.add_option("--format", format, "output format: csv or json");
    app.add_option("--out", out_path, "write output to a file instead of stdout");

    auto* c_eval = app.add_subcommand("eval", "evaluate a distribution or renewal curve on a time grid");
    c_eval->fallthrough();
    cd::ParamOpts p_eval;
    p_eval.attach(c_eval);
    cd::EvalFlags ef;
    c_eval->add_option("--target", ef.target, "curve: G, g, B, Z, R, or bounds");
    c_eval->add_option("--t-max", ef.t_max, "grid endpoint (> 0)");
    c_eval->add_option("--steps", ef.steps, "number of grid points (>= 2)");
    c_eval->add_option("--method", ef.method, "closed, general, or both");

    auto* c_moments = app.add_subcommand("moments", "moments of the service time, busy period, or busy cycle");
    c_moments->fallthrough();
    cd::ParamOpts p_moments;
    p_moments.attach(c_moments);
    cd::MomentFlags mf;
    c_moments->add_option("--which", mf.which, "T, B, or Z");
    c_moments->add_option("--n-max", mf.n_max, "highest moment order (>= 1)");
    c_moments->add_option("--method", mf.method, "T only: quadrature, series, or discretized");
    c_moments->add_option("--m", mf.m, "discretization level for --method discretized");

    auto* c_peaks = app.add_subcommand("peaks", "peak parameters of the busy period and busy cycle");
    c_peaks->fallthrough();
    cd::ParamOpts p_peaks;
    p_peaks.attach(c_peaks);

    auto* c_simulate = app.add_subcommand("simulate", "discrete-event simulation with summary statistics");
    c_simulate->fallthrough();
    cd::ParamOpts p_simulate;
    p_simulate.attach(c_simulate);
    cd::SimulateFlags sf;
    sf.seed_opt = c_simulate->add_option("--seed", sf.seed, "RNG seed (default: MGINF_SEED or 0)");
    c_simulate->add_option("--n-cycles", sf.n_cycles, "number of busy cycles to sample");
    c_simulate->add_option("--replications", sf.replications, "renewal-count replications (0 = skip)");
    sf.horizon_opt = c_simulate->add_option("--horizon", sf.horizon, "renewal horizon (default 10/lambda)");
    c_simulate->add_option("--start", sf.start, "initial condition: empty or arrival");
    c_simulate->add_option("--dump-prefix", sf.dump_prefix, "write sample and count files with this prefix");

    auto* c_validate = app.add_subcommand("validate", "run the closed-form / numeric / Monte Carlo cross-checks");
    c_validate->fallthrough();
    cd::ParamOpts p_validate;
    p_validate.attach(c_validate);
    std::string budget = "quick";
    std::uint64_t val_seed = 0;
    c_validate->add_option("--budget", budget, "quick (analytic/numeric) or full (adds Monte Carlo)");
    const CLI::Option* val_seed_opt =
        c_validate->add_option("--seed", val_seed, "RNG seed (default: MGINF_SEED or 0)");

    auto* c_sweep = app.add_subcommand("sweep", "evaluate scalar quantities over a parameter grid");
    c_sweep->fallthrough();
    cd::SweepFlags wf;
    c_sweep->add_option("--lambda-list", wf.lambdas, "arrival rates")->delimiter(',');
    c_sweep->add_option("--rho-list", wf.rhos, "traffic intensities")->delimiter(',');
    c_sweep->add_option("--eta-list", wf.etas, "canonical drifts")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (format != "csv" && format != "json")
            throw usage_error("--format must be csv or json");
        const bool as_json = format == "json";
        if (*c_eval) return cd::run_eval(ServiceLaw::canonicalize(p_eval.build()), ef, as_json, out_path, out);
        if (*c_moments)
            return cd::run_moments(ServiceLaw::canonicalize(p_moments.build()), mf, as_json, out_path, out);
        if (*c_peaks) return cd::run_peaks(ServiceLaw::canonicalize(p_peaks.build()), as_json, out_path, out);
        if (*c_simulate)
            return cd::run_simulate(ServiceLaw::canonicalize(p_simulate.build()), sf, out_path, out);
        if (*c_validate) {
            if (budget != "quick" && budget != "full") throw usage_error("--budget must be quick or full");
            const Budget b = budget == "full" ? Budget::full : Budget::quick;
            return cd::run_validate(p_validate.build(), b, cd::resolve_seed(val_seed_opt, val_seed), as_json,
                                    out_path, out);
        }
        if (*c_sweep) return cd::run_sweep(wf, as_json, out_path, out);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const constraint_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const numeric_error& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}

}  // namespace mginf
