#pragma once

// Test-only brute-force helpers, independent of the library's fast paths:
// dense matrices on the 4-dimensional path (x) spin space and plain 2x2
// spin algebra. Everything here is deliberately naive.

#include <array>
#include <complex>
#include <random>

#include "fcomp/qcore.hpp"

namespace oracle {

using fcomp::Cx;
using Mat2 = std::array<std::array<Cx, 2>, 2>;
using Mat4 = std::array<std::array<Cx, 4>, 4>;
using Vec4 = std::array<Cx, 4>;

inline Mat2 identity2() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

// z rotation: diag(exp(-i t/2), exp(+i t/2))
inline Mat2 rot_z(double t) {
    Mat2 m{};
    m[0][0] = std::polar(1.0, -t / 2.0);
    m[1][1] = std::polar(1.0, +t / 2.0);
    return m;
}

// kron(path_op, spin_op) with basis order (1,up),(1,down),(2,up),(2,down)
inline Mat4 kron(const Mat2& path_op, const Mat2& spin_op) {
    Mat4 m{};
    for (int pr = 0; pr < 2; ++pr)
        for (int pc = 0; pc < 2; ++pc)
            for (int sr = 0; sr < 2; ++sr)
                for (int sc = 0; sc < 2; ++sc)
                    m[2 * pr + sr][2 * pc + sc] = path_op[pr][pc] * spin_op[sr][sc];
    return m;
}

inline Mat4 add(const Mat4& a, const Mat4& b) {
    Mat4 m{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m[r][c] = a[r][c] + b[r][c];
    return m;
}

inline Mat4 mul(const Mat4& a, const Mat4& b) {
    Mat4 m{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int k = 0; k < 4; ++k) m[r][c] += a[r][k] * b[k][c];
    return m;
}

inline Vec4 apply(const Mat4& m, const Vec4& v) {
    Vec4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r] += m[r][c] * v[c];
    return out;
}

inline Mat2 path_projector(int path) {
    Mat2 m{};
    m[path - 1][path - 1] = 1.0;
    return m;
}

// |port><port| with <port|psi> = (c1 + s exp(i chi) c2)/sqrt(2)
inline Mat2 port_projector(int sign, double chi) {
    const Cx ph = std::polar(1.0 / std::sqrt(2.0), -chi); // ket phase
    const std::array<Cx, 2> ket = {1.0 / std::sqrt(2.0), static_cast<double>(sign) * ph};
    Mat2 m{};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m[r][c] = ket[r] * std::conj(ket[c]);
    return m;
}

inline Vec4 to_vec(const fcomp::qcore::CompositeState& s) { return s.amp; }

inline fcomp::qcore::CompositeState to_state(const Vec4& v) {
    fcomp::qcore::CompositeState s;
    s.amp = v;
    return s;
}

inline double max_abs_diff(const Vec4& a, const Vec4& b) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// random normalized composite state
inline fcomp::qcore::CompositeState random_state(std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    Vec4 v;
    double n2 = 0.0;
    for (Cx& a : v) {
        a = Cx(normal(gen), normal(gen));
        n2 += std::norm(a);
    }
    for (Cx& a : v) a /= std::sqrt(n2);
    return to_state(v);
}

// random beam with both ports safely bright (chi = 0 unless supplied)
inline fcomp::BeamConfig random_beam(std::mt19937_64& gen, double chi = 0.0) {
    std::uniform_real_distribution<double> u(0.75, 0.97);
    fcomp::BeamConfig cfg;
    cfg.a1 = u(gen);
    cfg.a2 = std::sqrt(1.0 - cfg.a1 * cfg.a1);
    cfg.chi = chi;
    return cfg;
}

} // namespace oracle
