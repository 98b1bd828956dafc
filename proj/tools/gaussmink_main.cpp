#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "gaussmink/continuation.hpp"
#include "gaussmink/errors.hpp"
#include "gaussmink/gauss.hpp"
#include "gaussmink/io.hpp"
#include "gaussmink/measure.hpp"
#include "gaussmink/variational.hpp"
#include "gaussmink/verify.hpp"

namespace {

using namespace gaussmink;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string brief(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

MeasureDensity load_measure(const std::string& path, int grid_n) {
    MeasureDensity mu = read_measure(path);
    if (grid_n == 0 || grid_n == mu.grid().size()) return mu;
    Grid g = make_grid(grid_n);
    ScalarField f = resample_to_grid(mu.density(), g);
    // Interpolation can undershoot zero and does not keep evenness exact to
    // the bit; project back onto the admissible class.
    Eigen::VectorXd v = f.values.cwiseMax(0.0);
    if (mu.even()) {
        const int half = g.size() / 2;
        for (int i = 0; i < half; ++i) {
            const double avg = 0.5 * (v[i] + v[i + half]);
            v[i] = avg;
            v[i + half] = avg;
        }
    }
    return MeasureDensity::from_values(make_field(g, std::move(v)), mu.even());
}

struct SolveArgs {
    std::string mode = "auto";
    double p = 0.0;
    std::string measure;
    int grid = 0;
    std::string out;
    std::string init;
    // continuation knobs
    double tol = 1e-10;
    int newton_max = 40;
    int steps_init = 1;
    double step_min = 1e-6;
    double c0 = 0.0;
    bool override_mass_bound = false;
    // variational knobs
    double tol_kkt = 1e-3;
    int max_iter = 5000;
    double step0 = -1.0;
};

int run_solve(const SolveArgs& a) {
    std::string mode = a.mode;
    if (mode == "auto") {
        if (a.p <= 0.0) {
            mode = "variational";
        } else if (a.p >= 1.0) {
            mode = "continuation";
        } else {
            std::cerr << "p in (0,1) unsupported\n";
            return 2;
        }
    }
    if (mode == "variational" && a.p > 0.0) {
        std::cerr << "variational mode requires p <= 0\n";
        return 2;
    }
    if (mode == "continuation" && a.p < 1.0) {
        std::cerr << "continuation mode requires p >= 1\n";
        return 2;
    }

    MeasureDensity mu = load_measure(a.measure, a.grid);
    if (mode == "variational") {
        VariationalOptions opts;
        opts.tol_kkt = a.tol_kkt;
        opts.max_iter = a.max_iter;
        opts.step0 = a.step0;
        if (!a.init.empty()) opts.init = read_body(a.init);
        VariationalReport rep = variational_solve(mu, a.p, opts);
        std::cout << "solve mode=variational p=" << brief(a.p)
                  << " kkt=" << brief(rep.kkt_residual)
                  << " gamma=" << brief(gaussian_volume(rep.body))
                  << " lambda=" << brief(rep.lambda) << "\n";
        if (!a.out.empty()) write_variational_report(a.out, rep);
    } else {
        HomotopyConfig cfg;
        cfg.p = a.p;
        cfg.newton_tol = a.tol;
        cfg.newton_max = a.newton_max;
        cfg.steps_init = a.steps_init;
        cfg.step_min = a.step_min;
        if (a.c0 > 0.0) cfg.c0 = a.c0;
        cfg.override_mass_bound = a.override_mass_bound;
        SolveReport rep = continuation_solve(mu, cfg);
        for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "solve mode=continuation p=" << brief(a.p)
                  << " residual=" << brief(rep.residual_linf)
                  << " gamma=" << brief(rep.gamma) << " lambda=1\n";
        if (!a.out.empty()) write_solve_report(a.out, rep);
    }
    return 0;
}

int run_measure(const std::string& body_path, double p) {
    Body body = read_body(body_path);
    std::cout << "gamma,total,total_oracle,deficit\n";
    std::cout << num(gaussian_volume(body)) << ',' << num(lp_total(body, p)) << ','
              << num(lp_total_boundary_oracle(body, p)) << ',';
    if (p >= 1.0) std::cout << num(isoperimetric_deficit(body, p).deficit);
    std::cout << "\n";
    return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, int count,
               const std::string& out) {
    std::vector<SuiteResult> results;
    const bool all = suite == "all";
    if (all || suite == "duality") {
        results.push_back(run_duality_suite(seed, count > 0 ? count : 100));
    }
    if (all || suite == "variation") {
        results.push_back(run_variation_suite(seed, count > 0 ? count : 40, {1e-3, 1e-4, 1e-5}));
    }
    if (all || suite == "isoperimetric") {
        results.push_back(
            run_isoperimetric_suite(seed, count > 0 ? count : 200, {1.0, 1.5, 2.0, 3.0}));
    }
    if (all || suite == "solver") {
        results.push_back(run_solver_cross_suite(seed));
    }
    bool ok = true;
    for (const SuiteResult& r : results) {
        ok = ok && r.pass;
        std::cerr << r.suite << ": " << (r.pass ? "pass" : "FAIL") << " (" << r.cases
                  << " cases, worst violation " << brief(r.worst_violation) << ")\n";
    }
    const std::string csv = suite_csv(results);
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text(out, csv);
    }
    return ok ? 0 : 1;
}

bool parse_range(const std::string& s, double& lo, double& hi, double& step) {
    char extra = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3) return false;
    return step > 0.0 && hi >= lo - 1e-12;
}

int thread_cap() {
    const unsigned hw = std::thread::hardware_concurrency();
    int cap = hw ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("GAUSSMINK_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return cap;
}

SweepRow sweep_one(double p, const MeasureDensity& mu, bool override_mass_bound) {
    SweepRow row;
    row.p = p;
    row.mass = mu.mass();
    if (p <= 0.0) {
        VariationalReport rep = variational_solve(mu, p);
        row.gamma = gaussian_volume(rep.body);
        row.total = lp_total(rep.body, p);
        row.deficit = std::nan("");
        row.homotopy_steps = 0;
        row.iterations = rep.iterations;
    } else if (p >= 1.0) {
        HomotopyConfig cfg;
        cfg.p = p;
        cfg.override_mass_bound = override_mass_bound;
        SolveReport rep = continuation_solve(mu, cfg);
        row.gamma = rep.gamma;
        row.total = lp_total(rep.body, p);
        row.deficit = isoperimetric_deficit(rep.body, p).deficit;
        row.homotopy_steps = rep.homotopy_steps_used;
        row.iterations = rep.newton_iterations_total;
    } else {
        fail("UnsupportedExponent", "p in (0,1) unsupported");
    }
    return row;
}

int run_sweep(const std::string& p_range, const std::string& mass_range, double fixed_p,
              const std::string& measure_path, bool override_mass_bound,
              const std::string& out) {
    if (p_range.empty() == mass_range.empty()) {
        std::cerr << "exactly one of --p-range and --mass-range is required\n";
        return 2;
    }
    double lo = 0.0, hi = 0.0, step = 0.0;
    const std::string& range = p_range.empty() ? mass_range : p_range;
    if (!parse_range(range, lo, hi, step)) {
        std::cerr << "range must be lo:hi:step with step > 0\n";
        return 2;
    }
    if (p_range.empty() && fixed_p == 0.0) {
        std::cerr << "--mass-range requires --p\n";
        return 2;
    }

    MeasureDensity base = read_measure(measure_path);
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> ps(n);
    std::vector<MeasureDensity> mus;
    mus.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * step;
        if (!p_range.empty()) {
            ps[i] = x;
            mus.push_back(base);
        } else {
            ps[i] = fixed_p;
            mus.push_back(with_mass(base, x));
        }
    }

    std::vector<std::optional<SweepRow>> rows(n);
    std::vector<std::string> errors(n);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                rows[i] = sweep_one(ps[i], mus[i], override_mass_bound);
            } catch (const Error& e) {
                errors[i] = e.what();  // already carries the error name
            }
        }
    };
    const int workers = std::min(thread_cap(), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    std::vector<SweepRow> table;
    for (int i = 0; i < n; ++i) {
        if (rows[i]) {
            table.push_back(*rows[i]);
        } else {
            std::cerr << "warning: skipped " << (p_range.empty() ? "mass=" : "p=")
                      << brief(lo + i * step) << " (" << errors[i] << ")\n";
        }
    }
    const std::string csv = sweep_csv(table);
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text(out, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L_p Gaussian Minkowski problem toolkit (planar case)"};
    app.require_subcommand(1);

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "solve for a convex body from a measure file");
    solve->add_option("--mode", sa.mode, "auto | variational | continuation")
        ->check(CLI::IsMember({"auto", "variational", "continuation"}));
    solve->add_option("--p", sa.p, "measure exponent")->required();
    solve->add_option("--measure", sa.measure, "measure JSON file")->required();
    solve->add_option("--grid", sa.grid, "resample the measure onto this grid size");
    solve->add_option("--out", sa.out, "report JSON output path");
    solve->add_option("--init", sa.init, "initial body JSON (variational)");
    solve->add_option("--tol", sa.tol, "Newton residual tolerance (continuation)");
    solve->add_option("--newton-max", sa.newton_max, "Newton iteration cap per step");
    solve->add_option("--steps-init", sa.steps_init, "initial homotopy step count");
    solve->add_option("--step-min", sa.step_min, "smallest homotopy step");
    solve->add_option("--c0", sa.c0, "constant density starting the homotopy");
    solve->add_flag("--override-mass-bound", sa.override_mass_bound,
                    "proceed past the small-mass existence gate");
    solve->add_option("--tol-kkt", sa.tol_kkt, "KKT tolerance (variational)");
    solve->add_option("--max-iter", sa.max_iter, "ascent iteration cap (variational)");
    solve->add_option("--step0", sa.step0, "initial ascent step (variational)");

    std::string measure_body;
    double measure_p = 1.0;
    CLI::App* measure = app.add_subcommand("measure", "evaluate volume, measure totals, deficit");
    measure->add_option("--body", measure_body, "body JSON file")->required();
    measure->add_option("--p", measure_p, "measure exponent")->required();

    std::string verify_suite;
    std::uint64_t verify_seed = 0;
    int verify_count = -1;
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "run property suites");
    verify->add_option("--suite", verify_suite, "duality | variation | isoperimetric | solver | all")
        ->required()
        ->check(CLI::IsMember({"duality", "variation", "isoperimetric", "solver", "all"}));
    verify->add_option("--seed", verify_seed, "generator seed")->required();
    verify->add_option("--count", verify_count, "cases per suite (suite default if omitted)");
    verify->add_option("--out", verify_out, "CSV output path (stdout if omitted)");

    std::string sweep_p_range, sweep_mass_range, sweep_measure, sweep_out;
    double sweep_p = 0.0;
    bool sweep_override = false;
    CLI::App* sweep = app.add_subcommand("sweep", "solve across a range of p or mass");
    sweep->add_option("--p-range", sweep_p_range, "lo:hi:step over the exponent");
    sweep->add_option("--mass-range", sweep_mass_range, "lo:hi:step over the measure mass");
    sweep->add_option("--p", sweep_p, "exponent used with --mass-range");
    sweep->add_option("--measure", sweep_measure, "measure JSON file")->required();
    sweep->add_flag("--override-mass-bound", sweep_override,
                    "proceed past the small-mass existence gate");
    sweep->add_option("--out", sweep_out, "CSV output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return run_solve(sa);
        if (measure->parsed()) return run_measure(measure_body, measure_p);
        if (verify->parsed()) return run_verify(verify_suite, verify_seed, verify_count, verify_out);
        if (sweep->parsed()) {
            return run_sweep(sweep_p_range, sweep_mass_range, sweep_p, sweep_measure,
                             sweep_override, sweep_out);
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";  // what() starts with the error name
        return e.name() == "BadFile" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
