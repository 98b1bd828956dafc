#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "gaussmink/body.hpp"
#include "gaussmink/grid.hpp"
#include "gaussmink/io.hpp"
#include "gaussmink/measure.hpp"

// Exercises the installed binary end to end through a shell, the way users
// run it. GAUSSMINK_BIN is injected by the build.

using namespace gaussmink;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string tmp_path(const std::string& name) {
    return "/tmp/gaussmink_cli_" + std::to_string(getpid()) + "_" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

CmdResult run(const std::string& args) {
    const std::string out_path = tmp_path("stdout.txt");
    const std::string err_path = tmp_path("stderr.txt");
    const std::string cmd = "GAUSSMINK_THREADS=1 " GAUSSMINK_BIN " " + args + " > " + out_path +
                            " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string write_even_ripple_measure(int n) {
    Grid g = make_grid(n);
    const double c0 = std::exp(-0.5) / kTwoPi;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n / 2; ++i) {
        v[i] = c0 * (1.0 + 0.2 * std::cos(2.0 * g.node(i)));
        v[i + n / 2] = v[i];
    }
    const std::string path = tmp_path("ripple.json");
    write_measure(path, MeasureDensity::from_values(make_field(g, v), true));
    return path;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("").code == 2);
    CHECK(run("explode").code == 2);
    CHECK(run("verify --suite nosuch --seed 1").code == 2);
    CHECK(run("solve --p 1").code == 2);  // --measure is required

    CmdResult gap = run("solve --mode auto --p 0.5 --measure /tmp/never-read.json");
    CHECK(gap.code == 2);
    CHECK(gap.err.find("p in (0,1) unsupported") != std::string::npos);

    CmdResult mismatch = run("solve --mode variational --p 3 --measure /tmp/never-read.json");
    CHECK(mismatch.code == 2);
    CHECK(mismatch.err.find("requires p <= 0") != std::string::npos);

    CHECK(run("--help").code == 0);
}

TEST_CASE("solver rejections surface the error name with exit 1") {
    Grid g = make_grid(32);
    const std::string path = tmp_path("skew.json");
    Eigen::VectorXd v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = 0.2 + 0.1 * std::sin(g.node(i));
    write_measure(path, MeasureDensity::from_values(make_field(g, v), false));

    CmdResult r = run("solve --p -1 --measure " + path);
    CHECK(r.code == 1);
    CHECK(r.err.find("MeasureNotEven") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("malformed input files exit with code 2") {
    const std::string path = tmp_path("broken.json");
    write_text(path, "{ definitely not json");
    CmdResult r = run("measure --body " + path + " --p 1");
    CHECK(r.code == 2);
    CHECK(r.err.find("BadFile") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("measure command reports closed-form ball values") {
    const std::string path = tmp_path("ball.json");
    write_body(path, ball_body(make_grid(256), 1.0));

    CmdResult r = run("measure --body " + path + " --p 1");
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, data;
    std::getline(lines, header);
    std::getline(lines, data);
    CHECK(header == "gamma,total,total_oracle,deficit");
    std::vector<std::string> f = split_csv_line(data);
    REQUIRE(f.size() == 4);
    CHECK(std::abs(std::stod(f[0]) - (1.0 - std::exp(-0.5))) < 1e-9);
    CHECK(std::abs(std::stod(f[1]) - std::exp(-0.5)) < 1e-9);
    CHECK(std::abs(std::stod(f[2]) - std::exp(-0.5)) < 1e-6);
    CHECK(std::stod(f[3]) >= 0.0);

    // Below p = 1 no deficit is defined; the cell stays empty.
    CmdResult r0 = run("measure --body " + path + " --p 0");
    REQUIRE(r0.code == 0);
    std::istringstream lines0(r0.out);
    std::getline(lines0, header);
    std::getline(lines0, data);
    CHECK(split_csv_line(data)[3].empty());
    std::remove(path.c_str());
}

TEST_CASE("continuation solve writes a report that round-trips bit-exactly") {
    const std::string measure_path = write_even_ripple_measure(64);
    const std::string rep_path = tmp_path("report.json");
    CmdResult r = run("solve --p 3 --measure " + measure_path + " --out " + rep_path);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("mode=continuation") != std::string::npos);
    CHECK(r.out.find("lambda=1") != std::string::npos);

    SolveReport rep = read_solve_report(rep_path);
    CHECK(rep.residual_linf < 1e-9);
    const std::string copy_path = tmp_path("report_copy.json");
    write_solve_report(copy_path, rep);
    CHECK(slurp(copy_path) == slurp(rep_path));

    std::remove(measure_path.c_str());
    std::remove(rep_path.c_str());
    std::remove(copy_path.c_str());
}

TEST_CASE("variational solve writes a report that round-trips bit-exactly") {
    Grid g = make_grid(64);
    const std::string measure_path = tmp_path("uniform.json");
    write_measure(measure_path, uniform_measure(g, 1.0));
    const std::string rep_path = tmp_path("vreport.json");

    CmdResult r = run("solve --p -1 --measure " + measure_path + " --out " + rep_path);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("mode=variational") != std::string::npos);

    VariationalReport rep = read_variational_report(rep_path);
    CHECK(rep.kkt_residual < 1e-3);
    const std::string copy_path = tmp_path("vreport_copy.json");
    write_variational_report(copy_path, rep);
    CHECK(slurp(copy_path) == slurp(rep_path));

    std::remove(measure_path.c_str());
    std::remove(rep_path.c_str());
    std::remove(copy_path.c_str());
}

TEST_CASE("verify subcommand emits the suite table and exits by pass/fail") {
    CmdResult r = run("verify --suite duality --seed 1 --count 2");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("suite,case,quantity,value,bound,violation", 0) == 0);
    CHECK(r.err.find("duality: pass") != std::string::npos);

    const std::string csv_path = tmp_path("suite.csv");
    CmdResult r2 = run("verify --suite duality --seed 1 --count 2 --out " + csv_path);
    CHECK(r2.code == 0);
    CHECK(r2.out.empty());
    CHECK(slurp(csv_path) == r.out);  // same seed, same table, wherever it goes
    std::remove(csv_path.c_str());
}

TEST_CASE("sweep over p writes one row per exponent") {
    const std::string measure_path = write_even_ripple_measure(32);
    CmdResult r = run("sweep --p-range 2.5:3.5:0.5 --measure " + measure_path);
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "p,mass,gamma,S_p,deficit,homotopy_steps,iters");
    int rows = 0;
    double expected_p = 2.5;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        REQUIRE(f.size() == 7);
        CHECK(std::stod(f[0]) == doctest::Approx(expected_p).epsilon(1e-12));
        CHECK(!f[4].empty());  // deficit defined for p >= 1
        expected_p += 0.5;
        ++rows;
    }
    CHECK(rows == 3);
    std::remove(measure_path.c_str());
}

TEST_CASE("sweep over mass skips parameters past the existence gate") {
    Grid g = make_grid(32);
    const std::string measure_path = tmp_path("unit_uniform.json");
    write_measure(measure_path, uniform_measure(g, 1.0));

    CmdResult r = run("sweep --mass-range 0.3:0.45:0.15 --p 1 --measure " + measure_path);
    REQUIRE(r.code == 0);
    CHECK(r.err.find("warning: skipped mass=0.45") != std::string::npos);
    CHECK(r.err.find("MassBoundViolated") != std::string::npos);

    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);  // header
    int rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 1);

    CHECK(run("sweep --p-range 1:2:0.5 --mass-range 0.1:0.2:0.1 --p 1 --measure " +
              measure_path)
              .code == 2);
    CHECK(run("sweep --mass-range 0.1:0.2:0.1 --measure " + measure_path).code == 2);
    std::remove(measure_path.c_str());
}
