#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "gaussmink/body.hpp"
#include "gaussmink/grid.hpp"
#include "gaussmink/io.hpp"
#include "gaussmink/measure.hpp"
#include "helpers.hpp"

using namespace gaussmink;
using testutil::error_name;
using testutil::sample;

namespace {

std::string tmp_path(const std::string& name) {
    return "/tmp/gaussmink_io_" + std::to_string(getpid()) + "_" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("body files round-trip bit for bit") {
    Grid g = make_grid(64);
    Body wavy = body_from_support(
        sample(g, [](double t) { return 1.0 + 0.08 * std::cos(3 * t) + 0.05 * std::sin(2 * t); }));
    const std::string path = tmp_path("body.json");
    write_body(path, wavy);
    Body back = read_body(path);
    CHECK((back.support().array() == wavy.support().array()).all());

    // Wulff shapes carry clipped, irrational node values; they must survive too.
    Body clipped = wulff_shape(sample(g, [](double t) { return 1.0 + 0.3 * std::cos(6 * t); }));
    write_body(path, clipped);
    CHECK((read_body(path).support().array() == clipped.support().array()).all());
    std::remove(path.c_str());
}

TEST_CASE("body files with structural problems are rejected as BadFile") {
    const std::string path = tmp_path("badbody.json");
    auto read_from = [&](const std::string& text) {
        write_text(path, text);
        return error_name([&] { read_body(path); });
    };

    CHECK(error_name([] { read_body("/tmp/gaussmink_io_no_such_file.json"); }) == "BadFile");
    CHECK(read_from("{ not json") == "BadFile");
    CHECK(read_from("{\"grid\": 16, \"support\": [1]}") == "BadFile");  // missing "n"
    CHECK(read_from("{\"n\": 3, \"grid\": 16, \"support\": []}") == "BadFile");
    CHECK(read_from("{\"n\": 2, \"grid\": 15, \"support\": []}") == "BadFile");
    CHECK(read_from("{\"n\": 2, \"grid\": 8, \"support\": []}") == "BadFile");
    CHECK(read_from("{\"n\": 2, \"grid\": 16, \"support\": [1, 2]}") == "BadFile");
    {
        std::string many = "{\"n\": 2, \"grid\": 16, \"support\": [";
        for (int i = 0; i < 16; ++i) many += (i ? ", \"x\"" : "\"x\"");
        many += "]}";
        CHECK(read_from(many) == "BadFile");
    }

    // Values that parse but fail geometry keep their own error names.
    Grid g = make_grid(64);
    std::string convexity_violation = "{\"n\": 2, \"grid\": 64, \"support\": [";
    for (int i = 0; i < 64; ++i) {
        if (i) convexity_violation += ", ";
        convexity_violation += std::to_string(1.0 + 0.9 * std::cos(2 * g.node(i)));
    }
    convexity_violation += "]}";
    CHECK(read_from(convexity_violation) == "NotConvex");
    std::remove(path.c_str());
}

TEST_CASE("measure files round-trip values and the even flag") {
    Grid g = make_grid(32);
    Eigen::VectorXd v(g.size());
    for (int i = 0; i < g.size() / 2; ++i) {
        v[i] = 0.1 + 0.03 * std::cos(2 * g.node(i));
        v[i + g.size() / 2] = v[i];
    }
    MeasureDensity even_mu = MeasureDensity::from_values(make_field(g, v), true);
    const std::string path = tmp_path("measure.json");
    write_measure(path, even_mu);
    MeasureDensity back = read_measure(path);
    CHECK(back.even());
    CHECK((back.values().array() == even_mu.values().array()).all());

    MeasureDensity skew = MeasureDensity::from_values(
        sample(g, [](double t) { return 0.2 + 0.1 * std::sin(t); }), false);
    write_measure(path, skew);
    CHECK(!read_measure(path).even());

    // The even flag is a claim the values must back up.
    std::string lying = "{\"grid\": 16, \"even\": true, \"density\": [";
    for (int i = 0; i < 16; ++i) lying += (i ? ", " : "") + std::to_string(1.0 + i);
    lying += "]}";
    write_text(path, lying);
    CHECK(error_name([&] { read_measure(path); }) == "MeasureNotEven");

    write_text(path, "{\"grid\": 16, \"even\": 1, \"density\": []}");
    CHECK(error_name([&] { read_measure(path); }) == "BadFile");
    std::remove(path.c_str());
}

TEST_CASE("solver report files round-trip every field") {
    Grid g = make_grid(16);
    SolveReport rep;
    rep.body = ball_body(g, 1.3);
    rep.residual_linf = 3.25e-11;
    rep.gamma = 0.571;
    rep.homotopy_steps_used = 3;
    rep.newton_iterations_total = 17;
    rep.mass = 0.6065306597126334;
    rep.warnings = {"first note", "second note"};
    const std::string path = tmp_path("solve.json");
    write_solve_report(path, rep);
    SolveReport back = read_solve_report(path);
    CHECK((back.body.support().array() == rep.body.support().array()).all());
    CHECK(back.residual_linf == rep.residual_linf);
    CHECK(back.gamma == rep.gamma);
    CHECK(back.homotopy_steps_used == rep.homotopy_steps_used);
    CHECK(back.newton_iterations_total == rep.newton_iterations_total);
    CHECK(back.mass == rep.mass);
    CHECK(back.warnings == rep.warnings);

    VariationalReport vrep;
    vrep.body = ball_body(g, 1.1774100225154747);
    vrep.lambda = 1.2253123493944116;
    vrep.kkt_residual = 4.4e-7;
    vrep.objective = 0.7711;
    vrep.iterations = 812;
    const std::string vpath = tmp_path("variational.json");
    write_variational_report(vpath, vrep);
    VariationalReport vback = read_variational_report(vpath);
    CHECK((vback.body.support().array() == vrep.body.support().array()).all());
    CHECK(vback.lambda == vrep.lambda);
    CHECK(vback.kkt_residual == vrep.kkt_residual);
    CHECK(vback.objective == vrep.objective);
    CHECK(vback.iterations == vrep.iterations);
    // The file also records the recomputed Gaussian volume for readers.
    CHECK(slurp(vpath).find("\"gamma\"") != std::string::npos);
    std::remove(path.c_str());
    std::remove(vpath.c_str());
}

TEST_CASE("suite tables render as CSV with quoted quantities") {
    SuiteResult s;
    s.suite = "duality";
    SuiteCase row;
    row.id = "body 1";
    row.quantity = "support vs radial, both extremes";
    row.value = 0.5;
    row.bound = 2e-3;
    row.violation = row.value - row.bound;
    s.rows.push_back(row);
    std::string csv = suite_csv({s});
    std::istringstream lines(csv);
    std::string header, line;
    std::getline(lines, header);
    std::getline(lines, line);
    CHECK(header == "suite,case,quantity,value,bound,violation");
    CHECK(line.find("\"support vs radial, both extremes\"") != std::string::npos);
    CHECK(line.find("0.5") != std::string::npos);
    CHECK(line.rfind("duality,body 1,", 0) == 0);
}

TEST_CASE("sweep tables leave the deficit empty when it is undefined") {
    SweepRow with;
    with.p = 2.5;
    with.mass = 0.25;
    with.gamma = 0.61;
    with.total = 0.31;
    with.deficit = 0.017;
    with.homotopy_steps = 4;
    with.iterations = 9;
    SweepRow without = with;
    without.p = -1.0;
    without.deficit = std::numeric_limits<double>::quiet_NaN();
    without.homotopy_steps = 0;

    std::string csv = sweep_csv({with, without});
    std::istringstream lines(csv);
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(header == "p,mass,gamma,S_p,deficit,homotopy_steps,iters");
    CHECK(first.find("0.017") != std::string::npos);
    CHECK(second.find(",,") != std::string::npos);
    CHECK(std::count(second.begin(), second.end(), ',') == 6);
}

TEST_CASE("write_text reports unwritable destinations") {
    CHECK(error_name([] { write_text("/nonexistent-dir/out.txt", "x"); }) == "BadFile");
}
