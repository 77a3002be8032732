// fmglab: command-line front end.
//
// Exit status: 0 ok, 1 numerical failure, 2 bad configuration, 3 boundary case,
// 4 divergence (partial output is kept).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmglab/charroots.hpp"
#include "fmglab/crossings.hpp"
#include "fmglab/dynamics.hpp"
#include "fmglab/error.hpp"
#include "fmglab/io.hpp"
#include "fmglab/linstab.hpp"

using namespace fmg;

namespace {

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidSpec:
        case ErrorCode::NoPositiveEquilibrium:
        case ErrorCode::NotAnEquilibrium:
        case ErrorCode::UnsupportedRegime:
            return 2;
        case ErrorCode::BoundaryCase:
            return 3;
        case ErrorCode::Divergence:
            return 4;
        default:
            return 1;
    }
}

unsigned default_jobs() {
    if (const char* env = std::getenv("FMGLAB_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return unsigned(v);
    }
    return 1;
}

/// "-" is stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error(ErrorCode::InvalidSpec, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct HistoryArgs {
    double x = 0.9;
    std::optional<double> dx;
    std::optional<double> x0;

    void add(CLI::App* app) {
        app->add_option("--hist", x, "constant history x(t), -tau <= t <= 0")->capture_default_str();
        app->add_option("--dhist", dx, "constant history of x' (two-term; defaults to 0)");
        app->add_option("--x0", x0, "initial value overriding the history at t = 0");
    }
    HistorySpec spec() const {
        HistorySpec h = HistorySpec::constant(x, dx.value_or(0.0));
        h.x0 = x0;
        return h;
    }
};

struct SolverArgs {
    int corrector_iters = 1;
    std::size_t memory_window = 0;
    std::string dxhist_as = "y-history";
    bool signed_power = false;

    void add(CLI::App* app) {
        app->add_option("--corrector-iters", corrector_iters)->capture_default_str();
        app->add_option("--memory-window", memory_window, "nodes kept in the memory sums, 0 = all")->capture_default_str();
        app->add_option("--dxhist-as", dxhist_as)->check(CLI::IsMember({"y-history", "zero"}))->capture_default_str();
        app->add_flag("--signed-power", signed_power, "use |x|^r sign(x) for negative delayed states");
    }
    SolverOptions options() const {
        SolverOptions o;
        o.corrector_iters = corrector_iters;
        o.memory_window = memory_window;
        o.dxhist_as = dxhist_as == "zero" ? DxHistoryAs::Zero : DxHistoryAs::YHistory;
        o.signed_power = signed_power;
        return o;
    }
};

std::vector<double> equilibria_to_report(const ModelSpec& spec, std::optional<double> x_star) {
    if (x_star) return {*x_star};
    return equilibria(spec).points;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Mackey-Glass delay equations: stability, crossings, simulation"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    unsigned jobs = default_jobs();
    app.add_option("--jobs", jobs, "worker threads (default $FMGLAB_JOBS or 1)");
    CrossingOptions xopts;
    app.add_option("--k-max", xopts.k_max, "entries kept in each delay sequence")->capture_default_str();
    app.add_option("--omega-max", xopts.omega_max, "crossing frequency window, 0 = automatic")->capture_default_str();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "stability verdict per equilibrium (JSON lines)");
    std::string config;
    std::optional<double> x_star;
    classify_cmd->add_option("--config", config)->required();
    classify_cmd->add_option("--x-star", x_star);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "integrate the nonlinear equation, CSV t,x[,y]");
    double tau = 0.0, t_end = 100.0, h = 0.01;
    std::string out = "-";
    std::size_t stride = 1;
    HistoryArgs hist;
    SolverArgs solver;
    sim_cmd->add_option("--config", config)->required();
    sim_cmd->add_option("--tau", tau)->required();
    sim_cmd->add_option("--t-end", t_end)->capture_default_str();
    sim_cmd->add_option("--h", h, "target step, adjusted so that tau/h is an integer")->capture_default_str();
    sim_cmd->add_option("--out", out)->capture_default_str();
    sim_cmd->add_option("--stride", stride)->capture_default_str();
    hist.add(sim_cmd);
    solver.add(sim_cmd);

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "parameter scans");
    scan_cmd->require_subcommand(1);
    auto* scan_tau_cmd = scan_cmd->add_subcommand("tau", "bifurcation data over tau, CSV tau,tag,value");
    double tau_lo = 0.0, tau_hi = 1.0;
    std::size_t n_points = 32;
    AsymptoteOptions aopts;
    scan_tau_cmd->add_option("--config", config)->required();
    scan_tau_cmd->add_option("--tau-lo", tau_lo)->required();
    scan_tau_cmd->add_option("--tau-hi", tau_hi)->required();
    scan_tau_cmd->add_option("--n", n_points)->capture_default_str();
    scan_tau_cmd->add_option("--t-end", t_end)->capture_default_str();
    scan_tau_cmd->add_option("--h", h)->capture_default_str();
    scan_tau_cmd->add_option("--out", out)->capture_default_str();
    scan_tau_cmd->add_option("--settle-frac", aopts.settle_frac)->capture_default_str();
    scan_tau_cmd->add_option("--cluster-tol", aopts.cluster_tol)->capture_default_str();
    scan_tau_cmd->add_option("--prominence", aopts.prominence_frac)->capture_default_str();
    hist.add(scan_tau_cmd);
    solver.add(scan_tau_cmd);

    auto* scan_region_cmd = scan_cmd->add_subcommand("region", "verdict map over (a1, c), CSV");
    double b = 0.0, alpha = 0.9;
    double a1_lo = -10.0, a1_hi = 10.0, c_lo = 0.1, c_hi = 1.0;
    std::size_t n_a1 = 101, n_c = 11;
    scan_region_cmd->add_option("--b", b)->required();
    scan_region_cmd->add_option("--alpha", alpha)->required();
    scan_region_cmd->add_option("--a1-lo", a1_lo)->capture_default_str();
    scan_region_cmd->add_option("--a1-hi", a1_hi)->capture_default_str();
    scan_region_cmd->add_option("--n-a1", n_a1)->capture_default_str();
    scan_region_cmd->add_option("--c-lo", c_lo)->capture_default_str();
    scan_region_cmd->add_option("--c-hi", c_hi)->capture_default_str();
    scan_region_cmd->add_option("--n-c", n_c)->capture_default_str();
    scan_region_cmd->add_option("--out", out)->capture_default_str();

    auto* scan_a1_cmd = scan_cmd->add_subcommand("a1", "verdict transitions along a1 for fixed b, c (JSON)");
    double c = 0.0;
    std::size_t n_grid = 400;
    scan_a1_cmd->add_option("--b", b)->required();
    scan_a1_cmd->add_option("--c", c)->required();
    scan_a1_cmd->add_option("--alpha", alpha)->required();
    scan_a1_cmd->add_option("--a1-lo", a1_lo)->required();
    scan_a1_cmd->add_option("--a1-hi", a1_hi)->required();
    scan_a1_cmd->add_option("--n", n_grid)->capture_default_str();

    // critical-c
    auto* crit_cmd = app.add_subcommand("critical-c", "critical value of c where the a1 structure changes");
    std::string which = "c7";
    std::optional<double> bracket_lo, bracket_hi;
    crit_cmd->add_option("--b", b)->required();
    crit_cmd->add_option("--alpha", alpha)->required();
    crit_cmd->add_option("--which", which)->check(CLI::IsMember({"c0", "c1", "c2", "c5", "c7"}))->capture_default_str();
    crit_cmd->add_option("--lo", bracket_lo);
    crit_cmd->add_option("--hi", bracket_hi);

    // roots
    auto* roots_cmd = app.add_subcommand("roots", "characteristic roots in a window (JSON)");
    std::optional<double> lin_a, lin_b, lin_c;
    Window win;
    RootOptions ropts;
    roots_cmd->add_option("--config", config, "model; linearized at --x-star (default: positive equilibrium)");
    roots_cmd->add_option("--x-star", x_star);
    roots_cmd->add_option("--a", lin_a, "linear coefficients instead of a config");
    roots_cmd->add_option("--b", lin_b);
    roots_cmd->add_option("--c", lin_c);
    roots_cmd->add_option("--alpha", alpha);
    roots_cmd->add_option("--tau", tau)->required();
    roots_cmd->add_option("--re-lo", win.re_lo)->capture_default_str();
    roots_cmd->add_option("--re-hi", win.re_hi)->capture_default_str();
    roots_cmd->add_option("--im-lo", win.im_lo)->capture_default_str();
    roots_cmd->add_option("--im-hi", win.im_hi)->capture_default_str();
    roots_cmd->add_option("--grid", ropts.grid)->capture_default_str();

    // control
    auto* control_cmd = app.add_subcommand("control", "feedback gain range and the controlled verdict (JSON)");
    std::optional<double> gain;
    control_cmd->add_option("--config", config)->required();
    control_cmd->add_option("--k", gain, "gain to check (overrides k of the config)");

    // tau-star
    auto* tau_star_cmd = app.add_subcommand("tau-star", "closed-form critical delay of the one-term equation");
    double gamma = 0.0, beta = 0.0;
    std::string branch = "plus";
    tau_star_cmd->add_option("--gamma", gamma)->required();
    tau_star_cmd->add_option("--beta", beta)->required();
    tau_star_cmd->add_option("--alpha", alpha)->required();
    tau_star_cmd->add_option("--branch", branch)->check(CLI::IsMember({"plus", "minus"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*classify_cmd) {
            const ModelSpec spec = load_model(config);
            for (double x : equilibria_to_report(spec, x_star)) {
                const Equilibrium e = equilibrium_at(spec, x);
                std::cout << verdict_to_json(classify(spec, e.x_star, xopts), e.x_star) << '\n';
            }
        } else if (*sim_cmd) {
            const ModelSpec spec = load_model(config);
            Output o(out);
            if (t_end == 0.0) {
                write_trajectory_header(o.stream(), spec.is_two_term());
                return 0;
            }
            const Trajectory tr = integrate(spec, hist.spec(), tau, t_end, h, solver.options());
            write_trajectory_csv(o.stream(), tr, stride);
            if (tr.nonsmooth) std::cerr << "warning: history does not match x0, the solution has a kink at t = 0\n";
            if (tr.diverged) {
                std::cerr << "Divergence: |x| exceeded the bound at t = " << format_real(tr.time(tr.size())) << '\n';
                return 4;
            }
        } else if (*scan_tau_cmd) {
            const ModelSpec spec = load_model(config);
            ScanSettings st;
            st.t_end = t_end;
            st.h = h;
            st.solver = solver.options();
            st.asymptote = aopts;
            st.jobs = jobs;
            Output o(out);
            write_scan_csv(o.stream(), scan_tau(spec, hist.spec(), tau_lo, tau_hi, n_points, st));
        } else if (*scan_region_cmd) {
            Output o(out);
            write_region_csv(o.stream(), scan_region(b, alpha, {a1_lo, a1_hi}, n_a1, {c_lo, c_hi}, n_c, xopts, jobs));
        } else if (*scan_a1_cmd) {
            const auto ts = sweep_a1(b, c, alpha, a1_lo, a1_hi, n_grid, xopts, jobs);
            std::cout << '[';
            for (std::size_t i = 0; i < ts.size(); ++i)
                std::cout << (i ? "," : "") << "{\"a1\":" << format_real(ts[i].a1) << ",\"boundary\":\"" << ts[i].label()
                          << "\"}";
            std::cout << "]\n";
        } else if (*crit_cmd) {
            Interval br{};
            if (bracket_lo || bracket_hi) {
                if (!(bracket_lo && bracket_hi)) throw Error(ErrorCode::InvalidSpec, "--lo and --hi go together");
                br = {*bracket_lo, *bracket_hi};
            }
            const double v = find_critical_c(b, alpha, critical_c_from_string(which), br, xopts);
            std::cout << "{\"" << which << "\":" << format_real(v) << "}\n";
        } else if (*roots_cmd) {
            LinearFDDE eq;
            if (!config.empty()) {
                const ModelSpec spec = load_model(config);
                eq = linearize(spec, x_star ? *x_star : positive_equilibrium(spec));
            } else {
                if (!(lin_a && lin_b)) throw Error(ErrorCode::InvalidSpec, "give --config or --a/--b[/--c] --alpha");
                eq = {*lin_a, *lin_b, lin_c.value_or(0.0), alpha};
            }
            ropts.jobs = jobs;
            std::cout << roots_to_json(find_roots(eq, tau, win, ropts)) << '\n';
        } else if (*control_cmd) {
            ModelSpec spec = load_model(config);
            if (gain) spec = spec.with_k(*gain);
            const Interval range = control_range(spec);
            const double x = positive_equilibrium(spec);
            const LinearFDDE eq = linearize(spec, x);
            const StabilityVerdict v = classify(spec, x, xopts);
            std::ostringstream os;
            os << "{\"k_range\":[" << format_real(range.lo) << ',' << format_real(range.hi)
               << "],\"k\":" << format_real(spec.k()) << ",\"x_star\":" << format_real(x) << ",\"a\":" << format_real(eq.a)
               << ",\"b\":" << format_real(eq.b) << ",\"a1\":" << format_real(eq.a1());
            if (spec.is_two_term() && eq.b < 0.0 && spec.alpha() > 0.5) {
                // d7 = (alpha - 1/2) c7
                const double c7 = find_critical_c(eq.b, spec.alpha(), CriticalC::c7, {}, xopts);
                os << ",\"c\":" << format_real(eq.c) << ",\"c7\":" << format_real(c7)
                   << ",\"d7\":" << format_real(c7 * spec.lead());
                if (eq.c > c7) {
                    // first threshold below the a1 = 2b line; a1 = 2b itself is degenerate (a = b)
                    const double hi = 2.0 * eq.b - 1e-9 * std::abs(eq.b);
                    const double lo = 4.0 * std::min(eq.a1(), 2.0 * eq.b);
                    const auto ts = sweep_a1(eq.b, eq.c, spec.alpha(), lo, hi, 400, xopts, jobs);
                    if (!ts.empty() && ts.front().from == VerdictTag::StableAllDelay)
                        os << ",\"a24\":" << format_real(ts.front().a1);
                }
            }
            os << ",\"in_range\":" << (range.contains(spec.k()) ? "true" : "false") << ",\"verdict\":" << verdict_to_json(v)
               << "}\n";
            std::cout << os.str();
        } else if (*tau_star_cmd) {
            const double v = tau_star_one_term(gamma, beta, alpha, branch == "minus" ? RootBranch::Minus : RootBranch::Plus);
            std::cout << format_real(v) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
