#include "fcomp/analytic.hpp"

#include <cmath>

namespace fcomp::analytic {
namespace {

constexpr double kRealBranchTol = 1e-13;

// Port overlap denominator a1 +/- a2 exp(i chi); |.|^2 = 2 p_port.
Cx port_denominator(Port port, const BeamConfig& cfg) {
    return cfg.a1 + static_cast<double>(port_sign(port)) * cfg.a2 * std::polar(1.0, cfg.chi);
}

bool real_weak_values(const BeamConfig& cfg) {
    return cfg.a2 == 0.0 || std::abs(std::sin(cfg.chi)) <= kRealBranchTol;
}

void require_real_case(const BeamConfig& cfg, const char* who) {
    if (!real_weak_values(cfg))
        throw std::domain_error(std::string(who) +
                                " requires real weak values (chi = 0 mod pi)");
}

struct PortPair {
    Cx w1, w2;
};

PortPair weak_pair(Port port, const BeamConfig& cfg) {
    cfg.validate();
    const Cx denom = port_denominator(port, cfg);
    if (0.5 * std::norm(denom) <= kDarkPortTol)
        throw DivergentWeakValue(std::string("dark port ") + to_label(port) +
                                 ": path weak values diverge");
    const Cx w1 = cfg.a1 / denom;
    return {w1, 1.0 - w1};
}

} // namespace

WeakValue weak_value(Path path, Port port, const BeamConfig& cfg) {
    const PortPair w = weak_pair(port, cfg);
    return {path == Path::one ? w.w1 : w.w2, path, port};
}

double port_probability(Port port, const BeamConfig& cfg) {
    cfg.validate();
    return 0.5 + static_cast<double>(port_sign(port)) * cfg.a1 * cfg.a2 * std::cos(cfg.chi);
}

CompensationSolution compensation_solution(Port port, double alpha, const BeamConfig& cfg) {
    const PortPair w = weak_pair(port, cfg);
    const Cx s = w.w1 * std::sin(alpha / 2.0);
    const Cx c = w.w1 * std::cos(alpha / 2.0) + w.w2;
    if (std::abs(w.w1.imag()) <= kRealBranchTol && std::abs(w.w2.imag()) <= kRealBranchTol) {
        // real branch: amplitude >= 0 and beta0 continuous in alpha near 0
        const double amp = std::hypot(s.real(), c.real());
        return {Cx(2.0 * std::atan2(s.real(), c.real()), 0.0), Cx(amp, 0.0)};
    }
    const Cx amp = std::sqrt(c * c + s * s);
    if (std::abs(amp) < 1e-300)
        throw std::domain_error("compensation amplitude vanishes; phase undefined");
    const Cx beta0 = Cx(0.0, -2.0) * std::log((c + Cx(0.0, 1.0) * s) / amp);
    return {beta0, amp};
}

double series_beta0(Port port, double alpha, const BeamConfig& cfg) {
    return weak_pair(port, cfg).w1.real() * alpha;
}

double series_amplitude(Port port, double alpha, const BeamConfig& cfg) {
    const PortPair w = weak_pair(port, cfg);
    const double q = alpha / 2.0;
    return 1.0 - 0.5 * (w.w1 * w.w2).real() * q * q;
}

double effective_port_probability(Port port, double alpha, const BeamConfig& cfg) {
    const CompensationSolution sol = compensation_solution(port, alpha, cfg);
    return port_probability(port, cfg) * std::norm(sol.amplitude) * std::cosh(sol.beta0.imag());
}

SpinExpectations spin_expectations(Port port, double alpha, double beta, const BeamConfig& cfg) {
    const CompensationSolution sol = compensation_solution(port, alpha, cfg);
    const double re = sol.beta0.real(), im = sol.beta0.imag();
    return {std::cos(re - beta) / std::cosh(im),
            std::sin(re - beta) / std::cosh(im),
            std::tanh(im)};
}

SpinExpectations spin_variances(Port port, double alpha, double beta, const BeamConfig& cfg) {
    const SpinExpectations m = spin_expectations(port, alpha, beta, cfg);
    return {1.0 - m.x * m.x, 1.0 - m.y * m.y, 1.0 - m.z * m.z};
}

double ozawa_error(const EstimateAssignment& est, const BeamConfig& cfg) {
    double eps2 = 0.0;
    for (Port port : {Port::plus, Port::minus}) {
        const Cx w1 = weak_pair(port, cfg).w1;
        const double e = port == Port::plus ? est.est_plus : est.est_minus;
        eps2 += port_probability(port, cfg) * std::norm(w1 - e);
    }
    return eps2;
}

double max_sigma_x_from_error(double alpha, double eps2) {
    if (eps2 < 0.0) throw std::invalid_argument("eps2 must be non-negative");
    return 1.0 - 0.5 * alpha * alpha * eps2;
}

PresenceTable presence_table(const BeamConfig& cfg, MeasurementContext context) {
    cfg.validate();
    require_real_case(cfg, "presence_table");
    PresenceTable table;
    table.context = context;
    const double p1 = cfg.p1(), p2 = cfg.p2();
    if (context == MeasurementContext::whichway) {
        table.rows[0] = {"path1", p1, false, 1.0, 0.0};
        table.rows[1] = {"path2", p2, false, 0.0, 1.0};
    } else {
        int i = 0;
        for (Port port : {Port::plus, Port::minus}) {
            PresenceRow row;
            row.outcome = to_label(port);
            row.probability = port_probability(port, cfg);
            try {
                const PortPair w = weak_pair(port, cfg);
                row.presence1 = w.w1.real();
                row.presence2 = w.w2.real();
            } catch (const DivergentWeakValue&) {
                row.divergent = true;
            }
            table.rows[i++] = row;
        }
    }
    // The probability-weighted presences of a dark port tend to zero, so the
    // averages over finite rows equal p1, p2 in every case; the spread is the
    // context-independent sqrt(p1 p2).
    table.avg_presence1 = 0.0;
    table.avg_presence2 = 0.0;
    for (const PresenceRow& row : table.rows) {
        if (row.divergent) continue;
        table.avg_presence1 += row.probability * row.presence1;
        table.avg_presence2 += row.probability * row.presence2;
    }
    table.presence_spread = std::sqrt(p1 * p2);
    return table;
}

double mean_rotation(double alpha, const BeamConfig& cfg, MeasurementContext context) {
    cfg.validate();
    require_real_case(cfg, "mean_rotation");
    if (context == MeasurementContext::whichway) return cfg.p1() * alpha;
    // p omega_1 = <psi|port><port|P1|psi> stays finite on dark ports (-> 0)
    double avg = 0.0;
    const double r = 1.0 / std::sqrt(2.0);
    for (Port port : {Port::plus, Port::minus}) {
        const double overlap = port_denominator(port, cfg).real() * r;
        avg += overlap * cfg.a1 * r;
    }
    return avg * alpha;
}

AveragedFringe averaged_sigma_x(double alpha, double beta, const BeamConfig& cfg,
                                MeasurementContext context) {
    cfg.validate();
    require_real_case(cfg, "averaged_sigma_x");
    double c = 0.0, s = 0.0;
    if (context == MeasurementContext::whichway) {
        c = cfg.p1() * std::cos(alpha) + cfg.p2();
        s = cfg.p1() * std::sin(alpha);
    } else {
        for (Port port : {Port::plus, Port::minus}) {
            const double p = port_probability(port, cfg);
            if (p <= kDarkPortTol) continue;
            const double b0 = compensation_solution(port, alpha, cfg).beta0.real();
            c += p * std::cos(b0);
            s += p * std::sin(b0);
        }
    }
    AveragedFringe out;
    out.visibility = std::hypot(c, s);
    out.mean_phase = std::atan2(s, c);
    out.value = out.visibility * std::cos(beta - out.mean_phase);
    return out;
}

Cx weak_measurement_estimate(double sy, double sz, double alpha) {
    if (alpha == 0.0)
        throw std::invalid_argument("weak_measurement_estimate: alpha must be nonzero");
    return Cx(sy, sz) / alpha;
}

double field_to_angle(double b_z_tesla, double tau_seconds, double mu) {
    return -2.0 * mu * b_z_tesla * tau_seconds / kHbar;
}

double angle_to_field(double angle_radians, double tau_seconds, double mu) {
    if (tau_seconds == 0.0 || mu == 0.0)
        throw std::invalid_argument("angle_to_field: tau and mu must be nonzero");
    return -angle_radians * kHbar / (2.0 * mu * tau_seconds);
}

} // namespace fcomp::analytic
