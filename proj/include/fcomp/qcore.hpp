#pragma once

#include <array>

#include "fcomp/types.hpp"

namespace fcomp::qcore {

/// Pure state of the combined path (x) spin system: four complex amplitudes
/// indexed by (path, spin z-component). States may be sub-normalized after
/// projection or blocking; norm2() is then the probability of the branch.
///
/// Conventions, fixed once for the whole library:
///  - spin z basis: up = (1,0), down = (0,1); |s_x+> = (up + down)/sqrt(2)
///  - a z rotation by angle t maps up -> exp(-i t/2) up, down -> exp(+i t/2) down
///    (a positive rotation carries +x towards +y)
///  - exit ports: the overlap of port +/- with path amplitudes (c1, c2) is
///    (c1 +/- exp(i chi) c2)/sqrt(2), so the phase shifter acts on path 2.
struct CompositeState {
    std::array<Cx, 4> amp{}; // index = 2*(path-1) + spin

    Cx& at(Path p, Spin s) { return amp[index(p, s)]; }
    const Cx& at(Path p, Spin s) const { return amp[index(p, s)]; }

    static int index(Path p, Spin s) {
        return 2 * (static_cast<int>(p) - 1) + static_cast<int>(s);
    }

    double norm2() const;
};

/// Initial state a1|1> + a2|2> with the spin prepared along +x.
/// Throws std::invalid_argument on an invalid beam config.
CompositeState prepare_initial(const BeamConfig& cfg);

/// Coupling between path and spin: rotates the spin of the path-1 component
/// by alpha about z, leaves the path-2 component untouched. Unitary.
CompositeState apply_coupling(const CompositeState& state, double alpha);

/// Compensation: rotates the spin of both path components by -beta about z.
/// Unitary.
CompositeState apply_compensation(const CompositeState& state, double beta);

/// Projects onto one exit port (identity on spin). The result is
/// sub-normalized; its norm2() is the detection probability in that port.
CompositeState project_exit(const CompositeState& state, Port port, const BeamConfig& cfg);

/// Zeroes the amplitudes of the blocked path. The result is sub-normalized;
/// its norm2() is the survival probability.
CompositeState block_path(const CompositeState& state, Path blocked);

/// Expectation value of sigma_axis for the normalized spin-conditional state
/// (the path degree of freedom is traced out). Throws ZeroNormState if the
/// state is numerically empty.
double spin_expectation(const CompositeState& state, SpinAxis axis);

/// All three spin expectation values at once.
std::array<double, 3> spin_expectations(const CompositeState& state);

} // namespace fcomp::qcore
