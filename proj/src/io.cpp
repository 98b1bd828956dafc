#include "gaussmink/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "gaussmink/errors.hpp"
#include "gaussmink/gauss.hpp"
#include "gaussmink/grid.hpp"

namespace gaussmink {
namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("BadFile", "cannot open " + path);
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) fail("BadFile", path + " is not valid JSON");
    return j;
}

void dump_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail("BadFile", "cannot write " + path);
    out << j.dump(1) << '\n';
    if (!out) fail("BadFile", "short write to " + path);
}

// Field accessors that turn schema problems into BadFile instead of leaking
// nlohmann's type errors.
const json& expect(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (!j.is_object() || it == j.end()) {
        fail("BadFile", path + ": missing \"" + key + "\"");
    }
    return *it;
}

int expect_int(const json& j, const char* key, const std::string& path) {
    const json& v = expect(j, key, path);
    if (!v.is_number_integer()) fail("BadFile", path + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

double expect_double(const json& j, const char* key, const std::string& path) {
    const json& v = expect(j, key, path);
    if (!v.is_number()) fail("BadFile", path + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

Eigen::VectorXd expect_vector(const json& j, const char* key, int n, const std::string& path) {
    const json& v = expect(j, key, path);
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
        fail("BadFile", path + ": \"" + std::string(key) + "\" must be an array of length " +
                            std::to_string(n));
    }
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        if (!v[i].is_number()) fail("BadFile", path + ": non-numeric entry in \"" + key + "\"");
        out[i] = v[i].get<double>();
    }
    return out;
}

Grid grid_from_file(const json& j, const std::string& path) {
    const int n = expect_int(j, "grid", path);
    if (n < 16 || n % 2 != 0) {
        fail("BadFile", path + ": grid size must be even and at least 16, got " +
                            std::to_string(n));
    }
    return make_grid(n);
}

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// CSV field with RFC-style quoting; quantity strings contain commas.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_body(const std::string& path, const Body& body) {
    json j;
    j["n"] = 2;
    j["grid"] = body.grid().size();
    j["support"] = vector_json(body.support());
    dump_file(path, j);
}

Body read_body(const std::string& path) {
    json j = parse_file(path);
    if (expect_int(j, "n", path) != 2) {
        fail("BadFile", path + ": only the planar case n = 2 is supported");
    }
    Grid grid = grid_from_file(j, path);
    return body_from_support(make_field(grid, expect_vector(j, "support", grid.size(), path)));
}

void write_measure(const std::string& path, const MeasureDensity& mu) {
    json j;
    j["grid"] = mu.grid().size();
    j["density"] = vector_json(mu.values());
    j["even"] = mu.even();
    dump_file(path, j);
}

MeasureDensity read_measure(const std::string& path) {
    json j = parse_file(path);
    Grid grid = grid_from_file(j, path);
    const json& even = expect(j, "even", path);
    if (!even.is_boolean()) fail("BadFile", path + ": \"even\" must be a boolean");
    return MeasureDensity::from_values(
        make_field(grid, expect_vector(j, "density", grid.size(), path)), even.get<bool>());
}

void write_solve_report(const std::string& path, const SolveReport& report) {
    json j;
    j["grid"] = report.body.grid().size();
    j["support"] = vector_json(report.body.support());
    j["residual_linf"] = report.residual_linf;
    j["gamma"] = report.gamma;
    j["homotopy_steps"] = report.homotopy_steps_used;
    j["newton_iterations"] = report.newton_iterations_total;
    j["mass"] = report.mass;
    j["warnings"] = report.warnings;
    dump_file(path, j);
}

SolveReport read_solve_report(const std::string& path) {
    json j = parse_file(path);
    Grid grid = grid_from_file(j, path);
    SolveReport report;
    report.body = body_from_support(make_field(grid, expect_vector(j, "support", grid.size(), path)));
    report.residual_linf = expect_double(j, "residual_linf", path);
    report.gamma = expect_double(j, "gamma", path);
    report.homotopy_steps_used = expect_int(j, "homotopy_steps", path);
    report.newton_iterations_total = expect_int(j, "newton_iterations", path);
    report.mass = expect_double(j, "mass", path);
    const json& warnings = expect(j, "warnings", path);
    if (!warnings.is_array()) fail("BadFile", path + ": \"warnings\" must be an array");
    for (const json& w : warnings) {
        if (!w.is_string()) fail("BadFile", path + ": non-string warning entry");
        report.warnings.push_back(w.get<std::string>());
    }
    return report;
}

void write_variational_report(const std::string& path, const VariationalReport& report) {
    json j;
    j["grid"] = report.body.grid().size();
    j["support"] = vector_json(report.body.support());
    j["lambda"] = report.lambda;
    j["kkt_residual"] = report.kkt_residual;
    j["objective"] = report.objective;
    j["iterations"] = report.iterations;
    j["gamma"] = gaussian_volume(report.body);
    dump_file(path, j);
}

VariationalReport read_variational_report(const std::string& path) {
    json j = parse_file(path);
    Grid grid = grid_from_file(j, path);
    VariationalReport report;
    report.body = body_from_support(make_field(grid, expect_vector(j, "support", grid.size(), path)));
    report.lambda = expect_double(j, "lambda", path);
    report.kkt_residual = expect_double(j, "kkt_residual", path);
    report.objective = expect_double(j, "objective", path);
    report.iterations = expect_int(j, "iterations", path);
    return report;
}

std::string suite_csv(const std::vector<SuiteResult>& suites) {
    std::string out = "suite,case,quantity,value,bound,violation\n";
    for (const SuiteResult& s : suites) {
        for (const SuiteCase& row : s.rows) {
            out += csv_field(s.suite);
            out += ',';
            out += csv_field(row.id);
            out += ',';
            out += csv_field(row.quantity);
            out += ',';
            out += num17(row.value);
            out += ',';
            out += num17(row.bound);
            out += ',';
            out += num17(row.violation);
            out += '\n';
        }
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "p,mass,gamma,S_p,deficit,homotopy_steps,iters\n";
    for (const SweepRow& r : rows) {
        out += num17(r.p);
        out += ',';
        out += num17(r.mass);
        out += ',';
        out += num17(r.gamma);
        out += ',';
        out += num17(r.total);
        out += ',';
        if (!std::isnan(r.deficit)) out += num17(r.deficit);
        out += ',';
        out += std::to_string(r.homotopy_steps);
        out += ',';
        out += std::to_string(r.iterations);
        out += '\n';
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail("BadFile", "cannot write " + path);
    out << text;
    if (!out) fail("BadFile", "short write to " + path);
}

}  // namespace gaussmink
