#pragma once

#include <array>

#include "fcomp/types.hpp"

namespace fcomp::analytic {

/// Physical constants for the field-to-angle conversion helper.
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kNeutronMagneticMoment = -9.6623651e-27; // J/T

enum class MeasurementContext { interference, whichway };

inline const char* to_label(MeasurementContext c) {
    return c == MeasurementContext::interference ? "interference" : "whichway";
}

/// Weak value of a path projector for one (path, port) pair:
/// omega = <port|P_path|psi> / <port|psi>.
struct WeakValue {
    Cx value;
    Path path;
    Port port;
};

/// Phase and amplitude of the spin-overlap oscillation in beta:
/// s_x+ = A cos((beta - beta0)/2), s_x- = i A sin((beta - beta0)/2).
/// Both are complex in general and real when the weak values are real.
struct CompensationSolution {
    Cx beta0;
    Cx amplitude;
};

/// Port-conditional compensation estimates expressed as beta/alpha ratios.
struct EstimateAssignment {
    double est_plus = 0.0;
    double est_minus = 0.0;
};

struct SpinExpectations {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// One outcome row of the path-presence bookkeeping (Table-style):
/// outcome probability and the presence assigned to each path. In the
/// interference context the presences are the port weak values; in the
/// which-way context they are the projector eigenvalues. A dark port is
/// flagged divergent and carries no presence values.
struct PresenceRow {
    std::string outcome;
    double probability = 0.0;
    bool divergent = false;
    double presence1 = 0.0;
    double presence2 = 0.0;
};

struct PresenceTable {
    MeasurementContext context = MeasurementContext::interference;
    std::array<PresenceRow, 2> rows;
    double avg_presence1 = 0.0;  // equals p1
    double avg_presence2 = 0.0;  // equals p2
    double presence_spread = 0.0; // Delta = sqrt(p1 p2), same in both contexts
};

/// Port-averaged fringe at a common compensation angle:
/// value = visibility * cos(beta - mean_phase).
struct AveragedFringe {
    double value = 0.0;
    double mean_phase = 0.0;
    double visibility = 0.0;
};

/// omega_{path,port}. Throws DivergentWeakValue on a dark port.
WeakValue weak_value(Path path, Port port, const BeamConfig& cfg);

/// Detection probability of one exit port: 1/2 +/- a1 a2 cos(chi).
double port_probability(Port port, const BeamConfig& cfg);

/// Exact compensation phase beta0 and oscillation amplitude A for one port:
/// beta0 = 2 atan[ sin(a/2) / (w2/w1 + cos(a/2)) ], A^2 = 1 - 4 w1 w2 sin^2(a/4).
/// For real weak values beta0 is resolved on the branch continuous in alpha
/// (beta0 ~ w1 alpha near 0). Throws DivergentWeakValue on a dark port.
CompensationSolution compensation_solution(Port port, double alpha, const BeamConfig& cfg);

/// First-order compensation phase Re(omega_1) * alpha.
double series_beta0(Port port, double alpha, const BeamConfig& cfg);

/// First-order oscillation amplitude 1 - (1/2) w1 w2 (alpha/2)^2 (real case).
double series_amplitude(Port port, double alpha, const BeamConfig& cfg);

/// Detection probability of one port including the coupling back-action:
/// p * |A|^2 * cosh(Im beta0); reduces to p * A^2 in the real case. The two
/// ports sum to 1.
double effective_port_probability(Port port, double alpha, const BeamConfig& cfg);

/// Spin expectation values in the compensated exit beam:
/// <sx> = cos(Re b0 - beta)/cosh(Im b0), <sy> = sin(Re b0 - beta)/cosh(Im b0),
/// <sz> = tanh(Im b0).
SpinExpectations spin_expectations(Port port, double alpha, double beta, const BeamConfig& cfg);

/// Event-to-event variances Delta^2(<sigma_d>) of the three spin readouts,
/// from the definitional form p_+ (1 - m)^2 + p_- (-1 - m)^2 = 1 - m^2.
SpinExpectations spin_variances(Port port, double alpha, double beta, const BeamConfig& cfg);

/// Measurement error of a port-conditional estimate assignment:
/// eps^2 = sum_ports p |omega_1 - est|^2. Zero iff both estimates equal the
/// (real) weak values.
double ozawa_error(const EstimateAssignment& est, const BeamConfig& cfg);

/// Second-order prediction for the compensated spin component:
/// <sx> = 1 - (1/2) alpha^2 eps^2.
double max_sigma_x_from_error(double alpha, double eps2);

/// Path-presence bookkeeping for one measurement context (real case).
PresenceTable presence_table(const BeamConfig& cfg, MeasurementContext context);

/// Mean spin-rotation angle, identical in both contexts: avg(omega_1) * alpha.
double mean_rotation(double alpha, const BeamConfig& cfg, MeasurementContext context);

/// Port- (or path-) averaged <sigma_x> at a common compensation angle beta,
/// with its closed-form mean phase and visibility (real case).
AveragedFringe averaged_sigma_x(double alpha, double beta, const BeamConfig& cfg,
                                MeasurementContext context);

/// Conventional (no-compensation) weak-value estimate from the spin readouts
/// at beta = 0: omega ~ (<sy> + i <sz>)/alpha. Throws std::invalid_argument
/// for alpha = 0.
Cx weak_measurement_estimate(double sy, double sz, double alpha);

/// Spin precession angle -2 mu B_z tau / hbar picked up during transit time
/// tau through a field region B_z.
double field_to_angle(double b_z_tesla, double tau_seconds, double mu = kNeutronMagneticMoment);

/// Inverse of field_to_angle. Throws std::invalid_argument if tau or mu is 0.
double angle_to_field(double angle_radians, double tau_seconds, double mu = kNeutronMagneticMoment);

} // namespace fcomp::analytic
