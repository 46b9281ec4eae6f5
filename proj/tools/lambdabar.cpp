#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "plap/report.hpp"
#include "plap/selftest.hpp"
#include "plap/sharpness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelftest = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    std::string format = "table";
    std::string out;
    double tol_rel = 0.0; // 0 keeps the solver default
    std::size_t grid_size = 4096;
    unsigned seed = 42;
    std::string config_path;
};

std::string trim(const std::string& s) {
    const auto l = s.find_first_not_of(" \t\r");
    if (l == std::string::npos) return "";
    const auto r = s.find_last_not_of(" \t\r");
    return s.substr(l, r - l + 1);
}

// key=value file mirroring the subcommand flags; values given on the command
// line win. CLI11 only processes config options attached to the root app, so
// this is handled by hand.
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream file(path);
    if (!file)
        throw CLI::ValidationError("--config", "cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError(
                "--config", "expected key=value at line " +
                                std::to_string(lineno) + " of " + path);
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key == "config") continue;
        CLI::Option* op = cmd->get_option_no_throw("--" + key);
        if (op == nullptr)
            throw CLI::ValidationError("--config", "unknown key '" + key +
                                                       "' at line " +
                                                       std::to_string(lineno));
        if (op->count() > 0) continue; // explicit flag wins
        op->add_result(value);
        op->run_callback();
    }
}

void attach_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out, "Write output to this path");
    cmd->add_option("--tol-rel", opts.tol_rel,
                    "Override the relative quadrature tolerance");
    cmd->add_option("--grid-size", opts.grid_size,
                    "Rayleigh minimization grid size")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "RNG seed for randomized checks")
        ->capture_default_str();
    cmd->add_option("--config", opts.config_path,
                    "key=value file mirroring the flags (flags win)");
}

plap::OutputKind kind_of(const std::string& s) {
    if (s == "csv") return plap::OutputKind::Csv;
    if (s == "json") return plap::OutputKind::Json;
    return plap::OutputKind::Table;
}

void emit(const CommonOpts& opts, const std::string& content) {
    if (opts.out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(opts.out);
    if (!file) throw plap::Error("cannot open output path: " + opts.out);
    file << content;
}

plap::SolverConfig config_from(const CommonOpts& opts) {
    plap::SolverConfig cfg;
    if (opts.tol_rel > 0.0) cfg.quad_tol.rel = opts.tol_rel;
    return cfg;
}

plap::MethodSet parse_methods(const std::string& spec) {
    plap::MethodSet m{false, false, false};
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "all") m = {true, true, true};
        else if (tok == "quad") m.quad = true;
        else if (tok == "shoot") m.shoot = true;
        else if (tok == "rayleigh") m.rayleigh = true;
        else throw CLI::ValidationError("--methods",
                                        "unknown method '" + tok + "'");
    }
    if (!m.quad && !m.shoot && !m.rayleigh) m.quad = true;
    return m;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// lo:hi:count or lo:hi:count:log
std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError("--D-range", "expected lo:hi:count[:log]");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const int count = std::stoi(parts[2]);
    const bool log = parts.size() == 4 && parts[3] == "log";
    if (count < 2 || !(lo < hi) || (log && !(lo > 0.0)))
        throw CLI::ValidationError("--D-range", "invalid range");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / (count - 1);
        out[static_cast<std::size_t>(i)] =
            log ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo);
    }
    return out;
}

double resolve_curvature(const CLI::Option* k_opt, double K,
                         const CLI::Option* sqrtk_opt, double sqrt_minus_k) {
    if (sqrtk_opt->count() > 0) {
        if (k_opt->count() > 0)
            throw CLI::ValidationError("--K",
                                       "give either --K or --sqrt-minus-K");
        return -sqrt_minus_k * sqrt_minus_k;
    }
    return K;
}

int cmd_eigenvalue(const CommonOpts& opts, const plap::ModelParams& params,
                   const std::string& methods_spec) {
    const plap::MethodSet methods = parse_methods(methods_spec);
    const plap::SweepRecord rec = plap::compute_record(
        params, methods, opts.grid_size, config_from(opts));
    if (!rec.ok) {
        std::cerr << "error: " << rec.error << "\n";
        return kExitNumerical;
    }
    const std::vector<plap::SweepRecord> rows{rec};
    switch (kind_of(opts.format)) {
    case plap::OutputKind::Csv: emit(opts, plap::to_csv(rows)); break;
    case plap::OutputKind::Json: emit(opts, plap::to_json(rows)); break;
    case plap::OutputKind::Table: emit(opts, plap::to_table(rows)); break;
    }
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<double>& ps,
              const std::vector<int>& ns, const std::vector<double>& Ks,
              const std::vector<double>& Ds, const std::string& methods_spec) {
    const plap::MethodSet methods = parse_methods(methods_spec);
    const plap::SolverConfig cfg = config_from(opts);

    std::vector<plap::ModelParams> points;
    for (double p : ps)
        for (int n : ns)
            for (double K : Ks)
                for (double D : Ds) points.push_back({p, n, K, D});
    if (points.empty()) {
        std::cerr << "error: empty sweep grid\n";
        return kExitInvalid;
    }
    for (const auto& pt : points) pt.validate();

    std::vector<plap::SweepRecord> rows(points.size());
    plap::parallel_for(points.size(), plap::worker_count(),
                       [&](std::size_t i) {
                           rows[i] = plap::compute_record(
                               points[i], methods, opts.grid_size, cfg);
                       });
    switch (kind_of(opts.format)) {
    case plap::OutputKind::Csv: emit(opts, plap::to_csv(rows)); break;
    case plap::OutputKind::Json: emit(opts, plap::to_json(rows)); break;
    case plap::OutputKind::Table: emit(opts, plap::to_table(rows)); break;
    }
    return kExitOk;
}

int cmd_sharpness(const CommonOpts& opts, const std::vector<double>& eps_list,
                  double p, int n, double D_target) {
    const auto rows =
        plap::convergence_study(eps_list, p, n, D_target, config_from(opts));
    switch (kind_of(opts.format)) {
    case plap::OutputKind::Csv: emit(opts, plap::sharpness_to_csv(rows)); break;
    case plap::OutputKind::Json:
        emit(opts, plap::sharpness_to_json(rows));
        break;
    case plap::OutputKind::Table:
        emit(opts, plap::sharpness_to_table(rows));
        break;
    }
    for (const auto& r : rows) {
        if (r.upper < r.lower) {
            std::cerr << "error: bracket violated at eps="
                      << plap::format_number(r.eps) << " (lower="
                      << plap::format_number(r.lower) << " > upper="
                      << plap::format_number(r.upper) << ")\n";
            return kExitNumerical;
        }
    }
    return kExitOk;
}

int cmd_selftest(const CommonOpts& opts) {
    const auto checks = plap::run_selftest(config_from(opts));
    bool all_pass = true;
    if (kind_of(opts.format) == plap::OutputKind::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks) {
            all_pass = all_pass && c.pass;
            arr.push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"residual", c.residual},
                           {"threshold", c.threshold}});
        }
        emit(opts, arr.dump(2) + "\n");
    } else {
        std::ostringstream out;
        for (const auto& c : checks) {
            all_pass = all_pass && c.pass;
            char buf[192];
            std::snprintf(buf, sizeof(buf), "%-24s %s  residual=%-12.4g"
                          " threshold=%.4g\n",
                          c.name.c_str(), c.pass ? "PASS" : "FAIL",
                          c.residual, c.threshold);
            out << buf;
        }
        emit(opts, out.str());
    }
    return all_pass ? kExitOk : kExitSelftest;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp principal p-frequency lower bound for negatively "
                 "curved diameters: one-dimensional model solver, sweeps, "
                 "and the warped-product sharpness study"};
    app.require_subcommand(1);

    CommonOpts ev_opts, sw_opts, sh_opts, st_opts;

    // eigenvalue
    auto* ev = app.add_subcommand("eigenvalue",
                                  "Compute lambda_bar for one (p, n, K, D)");
    double ev_p = 2.0, ev_K = 0.0, ev_sqrtk = 0.0, ev_D = 1.0;
    int ev_n = 2;
    std::string ev_methods = "quad";
    ev->add_option("--p", ev_p, "Exponent p > 1")->required();
    ev->add_option("--n", ev_n, "Dimension n >= 2")->required();
    auto* ev_k_opt = ev->add_option("--K", ev_K, "Curvature lower bound, <= 0");
    auto* ev_sqrtk_opt = ev->add_option("--sqrt-minus-K", ev_sqrtk,
                                        "sqrt(-K) instead of K");
    ev->add_option("--D", ev_D, "Diameter D > 0")->required();
    ev->add_option("--methods", ev_methods,
                   "Comma list of quad,shoot,rayleigh or 'all'")
        ->capture_default_str();
    attach_common(ev, ev_opts);

    // sweep
    auto* sw = app.add_subcommand("sweep", "Parameter sweep, one row per point");
    std::string sw_p = "2", sw_n = "2", sw_K = "-1", sw_D, sw_Drange,
                sw_methods = "quad";
    sw->add_option("--p-list", sw_p, "Comma list of p values")
        ->capture_default_str();
    sw->add_option("--n-list", sw_n, "Comma list of n values")
        ->capture_default_str();
    sw->add_option("--K-list", sw_K, "Comma list of K values")
        ->capture_default_str();
    auto* sw_d_opt = sw->add_option("--D-list", sw_D, "Comma list of D values");
    auto* sw_dr_opt =
        sw->add_option("--D-range", sw_Drange, "lo:hi:count[:log]");
    sw->add_option("--methods", sw_methods,
                   "Comma list of quad,shoot,rayleigh or 'all'")
        ->capture_default_str();
    attach_common(sw, sw_opts);

    // sharpness
    auto* sh = app.add_subcommand(
        "sharpness", "Warped-product convergence study at K = -1");
    std::string sh_eps = "0.1,0.01,0.001";
    double sh_p = 2.0, sh_Dt = 2.0;
    int sh_n = 2;
    sh->add_option("--eps-list", sh_eps, "Decreasing eps values")
        ->capture_default_str();
    sh->add_option("--p", sh_p, "Exponent p > 1")->capture_default_str();
    sh->add_option("--n", sh_n, "Dimension n >= 2")->capture_default_str();
    sh->add_option("--D-target", sh_Dt, "Target diameter")
        ->capture_default_str();
    attach_common(sh, sh_opts);

    // selftest
    auto* st = app.add_subcommand("selftest", "Run the full invariant suite");
    attach_common(st, st_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (ev->parsed()) {
            apply_config(ev, ev_opts.config_path);
            const double K =
                resolve_curvature(ev_k_opt, ev_K, ev_sqrtk_opt, ev_sqrtk);
            plap::ModelParams params{ev_p, ev_n, K, ev_D};
            params.validate();
            return cmd_eigenvalue(ev_opts, params, ev_methods);
        }
        if (sw->parsed()) {
            apply_config(sw, sw_opts.config_path);
            std::vector<double> Ds;
            if (sw_dr_opt->count() > 0) Ds = parse_range(sw_Drange);
            if (sw_d_opt->count() > 0) {
                const auto more = parse_list(sw_D);
                Ds.insert(Ds.end(), more.begin(), more.end());
            }
            if (Ds.empty()) Ds = {1.0};
            std::vector<int> ns;
            for (double v : parse_list(sw_n)) ns.push_back(static_cast<int>(v));
            return cmd_sweep(sw_opts, parse_list(sw_p), ns, parse_list(sw_K),
                             Ds, sw_methods);
        }
        if (sh->parsed()) {
            apply_config(sh, sh_opts.config_path);
            return cmd_sharpness(sh_opts, parse_list(sh_eps), sh_p, sh_n,
                                 sh_Dt);
        }
        if (st->parsed()) {
            apply_config(st, st_opts.config_path);
            return cmd_selftest(st_opts);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const plap::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const plap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
