#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fcomp::acceptance {

/// Pinned thresholds of the verification suite. Defaults are the shipped
/// contract; tests may tighten individual entries to prove a criterion can
/// fail (negative control).
struct Tolerances {
    double table_exact = 1e-12;          // 1: presence-table entries
    double anchor_beta0_plus = 5e-4;     // 2: beta0+/alpha vs 0.6686
    double anchor_beta0_minus = 1.5e-3;  // 2: beta0-/alpha vs 1.8701
    double anchor_eff_prob = 5e-5;       // 2: effective port probabilities
    double fringe_se_band = 2.0;         // 3: simulated se within this factor of quoted
    double fringe_pull = 3.0;            // 3: |fit - exact| in units of fitted se
    double zero_error = 1e-12;           // 4: eps^2 at the weak values, <sx> at beta0
    double residual_order = 3.5;         // 5: fitted order of the visibility residual
    double oracle = 1e-9;                // 6: analytic vs state-vector pipeline
    double crosswalk_factor = 2.0;       // 7: remainder constant safety factor
    double coverage_lo = 0.62;           // 8: 1-sigma coverage band
    double coverage_hi = 0.74;
    double port_swap = 1e-12;            // 9: chi = pi relabeling
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details; // measured values, human readable
    double elapsed_ms = 0.0;
};

struct Report {
    uint64_t seed = 0;
    std::vector<CriterionResult> results;
    bool all_pass() const;
};

inline constexpr int kCriterionCount = 9;

/// Runs one criterion (1-based id).
CriterionResult run_criterion(int id, uint64_t seed, const Tolerances& tol = {});

/// Runs the whole suite.
Report run_all(uint64_t seed, const Tolerances& tol = {});

/// One PASS/FAIL line per criterion plus a summary line.
std::string render_text(const Report& report);

} // namespace fcomp::acceptance
