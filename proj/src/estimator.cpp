#include "fcomp/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "fcomp/rng.hpp"

namespace fcomp::estimator {
namespace {

void check_schedule(std::span<const FringePoint> points) {
    std::vector<double> betas;
    betas.reserve(points.size());
    for (const FringePoint& p : points) betas.push_back(p.beta);
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
    if (betas.size() < 3)
        throw std::invalid_argument("fit_fringe: need >= 3 distinct compensation settings");
    if (betas.back() - betas.front() <= M_PI / 2.0)
        throw std::invalid_argument("fit_fringe: schedule must span more than pi/2");
}

// symmetric positive-definite solve, n = 2 or 3, with inverse for covariance
struct Normal3 {
    double m[3][3]{};
    double b[3]{};
    double sol[3]{};
    double inv[3][3]{};

    void solve(int n) {
        double a[3][6]{};
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a[i][j] = m[i][j];
            a[i][n + i] = 1.0;
        }
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-300)
                throw std::invalid_argument("fit_fringe: singular normal equations");
            std::swap(a[piv], a[col]);
            const double d = a[col][col];
            for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                const double f = a[r][col];
                for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
            }
        }
        for (int i = 0; i < n; ++i) {
            sol[i] = 0.0;
            for (int j = 0; j < n; ++j) {
                inv[i][j] = a[i][n + j];
                sol[i] += inv[i][j] * b[j];
            }
        }
    }
};

} // namespace

FringeFit fit_fringe(std::span<const FringePoint> points, const FitOptions& options) {
    check_schedule(points);
    const int n_par = options.with_offset ? 3 : 2;
    if (static_cast<int>(points.size()) < n_par + 1)
        throw std::invalid_argument("fit_fringe: not enough settings for the model");

    bool any_zero = false, any_nonzero = false;
    for (const FringePoint& p : points) {
        if (!(p.std_error >= 0.0))
            throw std::invalid_argument("fit_fringe: negative or non-finite std_error");
        (p.std_error == 0.0 ? any_zero : any_nonzero) = true;
    }
    if (any_zero && any_nonzero)
        throw std::invalid_argument(
            "fit_fringe: degenerate weights (exact and noisy points mixed)");
    const bool weighted = any_nonzero;

    Normal3 nrm;
    for (const FringePoint& p : points) {
        const double w = weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
        const double basis[3] = {std::cos(p.beta), std::sin(p.beta), 1.0};
        for (int i = 0; i < n_par; ++i) {
            for (int j = 0; j < n_par; ++j) nrm.m[i][j] += w * basis[i] * basis[j];
            nrm.b[i] += w * basis[i] * p.value;
        }
    }
    nrm.solve(n_par);

    const double c = nrm.sol[0], s = nrm.sol[1];
    const double nu2 = c * c + s * s;
    if (nu2 < 1e-300) throw std::domain_error("fit_fringe: vanishing fringe amplitude");
    const double nu = std::sqrt(nu2);

    FringeFit fit;
    fit.beta0 = std::atan2(s, c);
    if (fit.beta0 <= -M_PI) fit.beta0 = M_PI; // report in (-pi, pi]
    fit.visibility = nu;
    // first-order propagation through beta0 = atan2(s, c), nu = hypot(c, s)
    fit.beta0_std = std::sqrt(std::max(0.0, (s * s * nrm.inv[0][0] - 2.0 * c * s * nrm.inv[0][1] +
                                             c * c * nrm.inv[1][1])) /
                              (nu2 * nu2));
    fit.visibility_std = std::sqrt(std::max(0.0, (c * c * nrm.inv[0][0] +
                                                  2.0 * c * s * nrm.inv[0][1] +
                                                  s * s * nrm.inv[1][1])) /
                                   nu2);
    if (options.with_offset) {
        fit.offset = nrm.sol[2];
        fit.offset_std = std::sqrt(std::max(0.0, nrm.inv[2][2]));
    }

    double chi2 = 0.0;
    for (const FringePoint& p : points) {
        const double w = weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
        const double r = p.value - (c * std::cos(p.beta) + s * std::sin(p.beta) + fit.offset);
        chi2 += w * r * r;
    }
    const int dof = static_cast<int>(points.size()) - n_par;
    fit.chi2_per_dof = dof > 0 ? chi2 / dof : 0.0;
    return fit;
}

std::vector<FringePoint> fringe_points(const simkit::FringeDataset& dataset) {
    std::vector<FringePoint> points;
    points.reserve(dataset.rows.size());
    for (const simkit::SettingCounts& row : dataset.rows) {
        if (row.detected() == 0)
            throw std::invalid_argument("fringe_points: setting at beta = " +
                                        std::to_string(row.beta) + " has zero detected counts");
        const simkit::SigmaXEstimate est = simkit::estimate_sigma_x(row.n_x_plus, row.n_x_minus);
        points.push_back(
            {row.beta, est.value, simkit::regularized_sigma_x_error(row.n_x_plus, row.n_x_minus)});
    }
    return points;
}

FringeFit fit_fringe(const simkit::FringeDataset& dataset, const FitOptions& options) {
    const std::vector<FringePoint> points = fringe_points(dataset);
    return fit_fringe(points, options);
}

Optimum optimize_compensation(const std::function<double(double)>& objective, double lo,
                              double hi) {
    if (!(lo < hi)) throw std::invalid_argument("optimize_compensation: empty bracket");
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 1e-7) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = objective(x1);
        }
    }
    double x = 0.5 * (a + b);
    if (x - lo < 1e-6 * (hi - lo) || hi - x < 1e-6 * (hi - lo))
        throw std::invalid_argument("optimize_compensation: bracket does not contain a maximum");

    // cosine-model refinement; exact for objectives of the form A cos(b - b0)
    for (double step : {1e-3, 1e-5}) {
        const double fp = objective(x + step), fm = objective(x - step);
        const double cpart = (fp + fm) / (2.0 * std::cos(step));
        const double spart = (fm - fp) / (2.0 * std::sin(step));
        const double shift = std::atan2(spart, cpart);
        if (!std::isfinite(shift) || std::abs(shift) > 0.1) break;
        x -= shift;
        x = std::clamp(x, lo, hi);
    }
    return {x, objective(x)};
}

std::vector<double> make_schedule(double start, double stop, size_t count) {
    if (count == 0) throw std::invalid_argument("schedule count must be positive");
    std::vector<double> grid(count);
    const double step = (stop - start) / static_cast<double>(count);
    for (size_t i = 0; i < count; ++i) grid[i] = start + step * static_cast<double>(i);
    return grid;
}

namespace {

struct Outcome {
    simkit::Context context;
    std::string label;
    double theory_weak = 0.0;
    double theory_exact = 0.0;
};

std::vector<Outcome> scan_outcomes(double alpha, const BeamConfig& cfg,
                                   analytic::MeasurementContext context) {
    std::vector<Outcome> outcomes;
    if (context == analytic::MeasurementContext::whichway) {
        outcomes.push_back({simkit::Context::whichway(Path::two), "path1", 1.0, 1.0});
        outcomes.push_back({simkit::Context::whichway(Path::one), "path2", 0.0, 0.0});
    } else {
        for (Port port : {Port::plus, Port::minus}) {
            Outcome o;
            o.context = simkit::Context::interference(port);
            o.label = to_label(port);
            o.theory_weak = analytic::weak_value(Path::one, port, cfg).value.real();
            o.theory_exact = analytic::compensation_solution(port, alpha, cfg).beta0.real() / alpha;
            outcomes.push_back(o);
        }
    }
    return outcomes;
}

} // namespace

std::vector<PresencePoint> presence_scan(std::span<const double> alphas, const BeamConfig& cfg,
                                         analytic::MeasurementContext context,
                                         const ScanOptions& options) {
    if (options.beta_schedule.empty())
        throw std::invalid_argument("presence_scan: beta schedule must be nonempty");
    std::vector<PresencePoint> result;
    for (size_t ia = 0; ia < alphas.size(); ++ia) {
        const double alpha = alphas[ia];
        if (alpha == 0.0)
            throw std::invalid_argument("presence_scan: alpha = 0 has no presence ratio");
        const std::vector<Outcome> outcomes = scan_outcomes(alpha, cfg, context);
        for (size_t io = 0; io < outcomes.size(); ++io) {
            const Outcome& o = outcomes[io];
            simkit::ExperimentConfig run;
            run.beam = cfg;
            run.alpha = alpha;
            run.context = o.context;
            run.beta_schedule = options.beta_schedule;
            run.shots_per_setting = options.shots_per_setting;
            run.seed = rng::derive(rng::derive(options.seed, ia), io);
            run.poisson_totals = options.poisson_totals;

            const FringeFit fit = fit_fringe(simkit::sample_run(run));
            // branch correction: the fit reports beta0 mod 2pi; resolve with
            // the weak-value asymptote so beta0/alpha stays meaningful
            const double hint = o.theory_weak * alpha;
            const double k = std::round((hint - fit.beta0) / (2.0 * M_PI));
            const double beta0 = fit.beta0 + 2.0 * M_PI * k;

            PresencePoint point;
            point.alpha = alpha;
            point.label = o.label;
            point.presence = beta0 / alpha;
            point.presence_std = fit.beta0_std / std::abs(alpha);
            point.theory_exact = o.theory_exact;
            point.theory_weak = o.theory_weak;
            result.push_back(point);
        }
    }
    return result;
}

} // namespace fcomp::estimator
