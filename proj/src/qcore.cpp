#include "fcomp/qcore.hpp"

#include <cmath>

namespace fcomp {

BeamConfig BeamConfig::from_ratio(double w1, double w2, double chi) {
    if (!(w1 >= 0.0) || !(w2 >= 0.0) || w1 + w2 <= 0.0)
        throw std::invalid_argument("beam ratio weights must be non-negative and not both zero");
    const double norm = w1 + w2;
    BeamConfig cfg;
    cfg.a1 = std::sqrt(w1 / norm);
    cfg.a2 = std::sqrt(w2 / norm);
    cfg.chi = chi;
    return cfg;
}

void BeamConfig::validate(double tol) const {
    if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(chi))
        throw std::invalid_argument("beam config has non-finite entries");
    if (a1 < 0.0 || a2 < 0.0)
        throw std::invalid_argument("beam amplitudes must be non-negative");
    if (std::abs(a1 * a1 + a2 * a2 - 1.0) > tol)
        throw std::invalid_argument("beam amplitudes are not normalized: a1^2 + a2^2 = " +
                                    std::to_string(a1 * a1 + a2 * a2));
}

double wrap_angle(double radians) {
    double w = std::remainder(radians, 2.0 * M_PI);
    if (w <= -M_PI) w += 2.0 * M_PI; // remainder returns [-pi, pi]; fold -pi to +pi
    return w;
}

double angle_distance(double a, double b) {
    return std::abs(wrap_angle(a - b));
}

namespace qcore {

double CompositeState::norm2() const {
    double n = 0.0;
    for (const Cx& a : amp) n += std::norm(a);
    return n;
}

CompositeState prepare_initial(const BeamConfig& cfg) {
    cfg.validate();
    const double r = 1.0 / std::sqrt(2.0);
    CompositeState s;
    s.at(Path::one, Spin::up) = cfg.a1 * r;
    s.at(Path::one, Spin::down) = cfg.a1 * r;
    s.at(Path::two, Spin::up) = cfg.a2 * r;
    s.at(Path::two, Spin::down) = cfg.a2 * r;
    return s;
}

static Cx phase(double t) { return std::polar(1.0, t); }

CompositeState apply_coupling(const CompositeState& state, double alpha) {
    CompositeState s = state;
    s.at(Path::one, Spin::up) *= phase(-alpha / 2.0);
    s.at(Path::one, Spin::down) *= phase(+alpha / 2.0);
    return s;
}

CompositeState apply_compensation(const CompositeState& state, double beta) {
    CompositeState s = state;
    for (Path p : {Path::one, Path::two}) {
        s.at(p, Spin::up) *= phase(+beta / 2.0);
        s.at(p, Spin::down) *= phase(-beta / 2.0);
    }
    return s;
}

CompositeState project_exit(const CompositeState& state, Port port, const BeamConfig& cfg) {
    const double r = 1.0 / std::sqrt(2.0);
    const double sgn = static_cast<double>(port_sign(port));
    const Cx ph = phase(cfg.chi);
    CompositeState s;
    for (Spin sp : {Spin::up, Spin::down}) {
        // overlap <port|state> for this spin component
        const Cx d = r * (state.at(Path::one, sp) + sgn * ph * state.at(Path::two, sp));
        s.at(Path::one, sp) = r * d;
        s.at(Path::two, sp) = r * sgn * std::conj(ph) * d;
    }
    return s;
}

CompositeState block_path(const CompositeState& state, Path blocked) {
    CompositeState s = state;
    s.at(blocked, Spin::up) = 0.0;
    s.at(blocked, Spin::down) = 0.0;
    return s;
}

std::array<double, 3> spin_expectations(const CompositeState& state) {
    const double n2 = state.norm2();
    if (n2 < kZeroNormTol)
        throw ZeroNormState("spin expectation undefined: state norm^2 = " + std::to_string(n2));
    // reduced spin density matrix element rho(up, down), path traced out
    Cx rho_ud = 0.0;
    double pop_up = 0.0, pop_down = 0.0;
    for (Path p : {Path::one, Path::two}) {
        rho_ud += state.at(p, Spin::up) * std::conj(state.at(p, Spin::down));
        pop_up += std::norm(state.at(p, Spin::up));
        pop_down += std::norm(state.at(p, Spin::down));
    }
    return {2.0 * rho_ud.real() / n2, -2.0 * rho_ud.imag() / n2, (pop_up - pop_down) / n2};
}

double spin_expectation(const CompositeState& state, SpinAxis axis) {
    return spin_expectations(state)[static_cast<int>(axis)];
}

} // namespace qcore
} // namespace fcomp
