#pragma once

#include <string>
#include <vector>

#include "gaussmink/body.hpp"
#include "gaussmink/continuation.hpp"
#include "gaussmink/measure.hpp"
#include "gaussmink/variational.hpp"
#include "gaussmink/verify.hpp"

namespace gaussmink {

// JSON file formats. Doubles are serialized with shortest round-trip decimal
// representation, so write-then-read reproduces every value bit for bit.
// Structural problems (unreadable file, wrong schema, n != 2, length
// mismatches) throw BadFile; values that parse but violate geometry keep
// their own error names (NotConvex and friends).

// {"n": 2, "grid": N, "support": [...]}
void write_body(const std::string& path, const Body& body);
Body read_body(const std::string& path);

// {"grid": N, "density": [...], "even": flag}
void write_measure(const std::string& path, const MeasureDensity& mu);
MeasureDensity read_measure(const std::string& path);

// {"grid", "support", "residual_linf", "gamma", "homotopy_steps",
//  "newton_iterations", "mass", "warnings"}
void write_solve_report(const std::string& path, const SolveReport& report);
SolveReport read_solve_report(const std::string& path);

// {"grid", "support", "lambda", "kkt_residual", "objective", "iterations",
//  "gamma"} with gamma recomputed from the support values.
void write_variational_report(const std::string& path, const VariationalReport& report);
VariationalReport read_variational_report(const std::string& path);

// Flat suite table: suite,case,quantity,value,bound,violation.
std::string suite_csv(const std::vector<SuiteResult>& suites);

struct SweepRow {
    double p = 0.0;
    double mass = 0.0;
    double gamma = 0.0;
    double total = 0.0;    // S_p of the solution
    double deficit = 0.0;  // NaN renders as an empty cell (p < 1)
    int homotopy_steps = 0;
    int iterations = 0;
};

// p,mass,gamma,S_p,deficit,homotopy_steps,iters
std::string sweep_csv(const std::vector<SweepRow>& rows);

void write_text(const std::string& path, const std::string& text);

}  // namespace gaussmink
