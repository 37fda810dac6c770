#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fcomp/analytic.hpp"
#include "fcomp/simkit.hpp"
#include "fcomp/types.hpp"

namespace fcomp::estimator {

/// One fringe sample: analyzer readout with its standard error at one
/// compensation setting.
struct FringePoint {
    double beta = 0.0;
    double value = 0.0;
    double std_error = 0.0; // 0 marks an exact (noise-free) point
};

struct FitOptions {
    bool with_offset = false; // add a constant term for robustness studies
};

/// Result of the cosine fit y(beta) = visibility * cos(beta - beta0) + offset.
struct FringeFit {
    double beta0 = 0.0;      // reported in (-pi, pi]
    double visibility = 0.0;
    double beta0_std = 0.0;
    double visibility_std = 0.0;
    double chi2_per_dof = 0.0;
    double offset = 0.0;     // fitted only when FitOptions::with_offset
    double offset_std = 0.0;
};

/// Weighted linear least squares in the basis {cos beta, sin beta} (plus a
/// constant when requested), exact for the fixed-period fringe model, with
/// closed-form parameter covariance. Weights are 1/std_error^2; if every
/// std_error is zero the fit is unweighted. Throws std::invalid_argument on
/// an underdetermined schedule (< 3 distinct settings or span <= pi/2) or on
/// a mix of zero and nonzero errors.
FringeFit fit_fringe(std::span<const FringePoint> points, const FitOptions& options = {});

/// Per-setting readout estimates for a sampled dataset. Values and reported
/// errors come from estimate_sigma_x; fit weights use the half-count
/// regularized error so settings with an empty bin stay finite. Throws on a
/// setting with zero detected counts.
std::vector<FringePoint> fringe_points(const simkit::FringeDataset& dataset);

/// Convenience: fringe_points + fit_fringe.
FringeFit fit_fringe(const simkit::FringeDataset& dataset, const FitOptions& options = {});

struct Optimum {
    double beta_star = 0.0;
    double max_value = 0.0;
};

/// Maximizes a fringe objective over [lo, hi]: golden-section search followed
/// by local cosine-model refinement (the objectives in scope are cosine
/// fringes, for which the refinement is exact). Throws std::invalid_argument
/// when the maximum sits on the bracket boundary.
Optimum optimize_compensation(const std::function<double(double)>& objective, double lo,
                              double hi);

/// One point of the presence-versus-coupling-strength scan.
struct PresencePoint {
    double alpha = 0.0;
    std::string label;       // port+/port- or path1/path2
    double presence = 0.0;   // fitted beta0 / alpha, branch-corrected
    double presence_std = 0.0;
    double theory_exact = 0.0; // Re beta0(alpha) / alpha
    double theory_weak = 0.0;  // Re omega_1 (alpha -> 0 asymptote)
};

struct ScanOptions {
    std::vector<double> beta_schedule;
    uint64_t shots_per_setting = 10000;
    uint64_t seed = 1;
    bool poisson_totals = false;
};

/// Simulates and fits every (alpha, outcome) pair: exit ports in the
/// interference context, paths in the which-way context. Output order follows
/// the alpha list, outcomes inner. Throws std::invalid_argument on alpha = 0.
std::vector<PresencePoint> presence_scan(std::span<const double> alphas, const BeamConfig& cfg,
                                         analytic::MeasurementContext context,
                                         const ScanOptions& options);

/// Evenly spaced schedule of `count` settings over [start, stop).
std::vector<double> make_schedule(double start, double stop, size_t count);

} // namespace fcomp::estimator
