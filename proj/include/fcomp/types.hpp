#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fcomp {

using Cx = std::complex<double>;

// Library-wide tolerance for exact-algebra checks (normalization,
// projector completeness, closed-form identities).
inline constexpr double kExactTol = 1e-12;

// States with squared norm below this are treated as empty; conditional
// quantities (spin expectations) are undefined on them.
inline constexpr double kZeroNormTol = 1e-24;

// Exit ports with detection probability below this are dark ports;
// their path weak values diverge.
inline constexpr double kDarkPortTol = 1e-12;

enum class Path : int { one = 1, two = 2 };
enum class Port : int { plus = +1, minus = -1 };
enum class Spin : int { up = 0, down = 1 };
enum class SpinAxis : int { x = 0, y = 1, z = 2 };

inline Path other_path(Path p) { return p == Path::one ? Path::two : Path::one; }
inline Port other_port(Port p) { return p == Port::plus ? Port::minus : Port::plus; }
inline int port_sign(Port p) { return static_cast<int>(p); }

inline const char* to_label(Path p) { return p == Path::one ? "path1" : "path2"; }
inline const char* to_label(Port p) { return p == Port::plus ? "port+" : "port-"; }

/// Raised when a requested quantity involves the path weak value of a
/// dark port (zero detection probability), where the value diverges.
class DivergentWeakValue : public std::domain_error {
public:
    explicit DivergentWeakValue(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a conditional expectation is requested on a state with
/// (numerically) zero norm.
class ZeroNormState : public std::domain_error {
public:
    explicit ZeroNormState(const std::string& what) : std::domain_error(what) {}
};

/// Beam-splitter amplitudes and interferometer phase.
///
/// a1 and a2 are the real, non-negative path amplitudes (a1^2 + a2^2 = 1);
/// chi is the relative phase between the paths picked up before the beams
/// recombine, in radians.
struct BeamConfig {
    double a1 = 1.0;
    double a2 = 0.0;
    double chi = 0.0;

    double p1() const { return a1 * a1; }
    double p2() const { return a2 * a2; }

    /// Beam with intensity ratio w1:w2 (e.g. 4:1) and phase chi.
    static BeamConfig from_ratio(double w1, double w2, double chi = 0.0);

    /// Throws std::invalid_argument unless amplitudes are non-negative,
    /// finite, and normalized within tol.
    void validate(double tol = kExactTol) const;
};

/// Wraps an angle to the interval (-pi, pi].
double wrap_angle(double radians);

/// Circular distance |a - b| after wrapping to (-pi, pi].
double angle_distance(double a, double b);

} // namespace fcomp
