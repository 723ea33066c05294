// Independent reference computations used to freeze expected values in the
// tests.  Everything here is implemented from first principles on purpose:
// plain batch statistics, closed-form transfer functions, textbook symmetric
// components via std::complex, and a per-phase phasor mesh solution of the
// output filter.  None of it shares code with the library under test.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// --------------------------------------------------------------------------
// Batch statistics.
// --------------------------------------------------------------------------

inline double batch_rms(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += x[k] * x[k];
    return std::sqrt(acc / static_cast<double>(hi - lo));
}

// --------------------------------------------------------------------------
// Closed-form frequency responses.
// --------------------------------------------------------------------------

// Band-pass path of the quadrature signal generator:
//   H(s) = k*wn*s / (s^2 + k*wn*s + wn^2), evaluated at s = j*w.
inline double qsg_inphase_gain(double k, double wn, double w) {
    const std::complex<double> s(0.0, w);
    const std::complex<double> h = k * wn * s / (s * s + k * wn * s + wn * wn);
    return std::abs(h);
}

// First-order low-pass magnitude at frequency f for cutoff fc.
inline double lowpass_gain(double f_hz, double fc_hz) {
    return 1.0 / std::sqrt(1.0 + (f_hz / fc_hz) * (f_hz / fc_hz));
}

// --------------------------------------------------------------------------
// Textbook symmetric components on conjugate-complexified pairs.
// A pair (d, q) with q lagging d by a quarter period maps to z = d - j*q.
// --------------------------------------------------------------------------

struct Sequences {
    std::complex<double> pos, neg, zero;
};

inline Sequences symmetric_components(const std::complex<double>& za,
                                      const std::complex<double>& zb,
                                      const std::complex<double>& zc) {
    const std::complex<double> a = std::polar(1.0, 2.0 * kPi / 3.0);
    const std::complex<double> a2 = std::polar(1.0, -2.0 * kPi / 3.0);
    return Sequences{
        (za + a * zb + a2 * zc) / 3.0,
        (za + a2 * zb + a * zc) / 3.0,
        (za + zb + zc) / 3.0,
    };
}

// --------------------------------------------------------------------------
// Discrete projection of a sampled waveform onto e^{j*w*t}: returns X such
// that x(t) ~= Re{X e^{j*w*t}}.  Exact for sinusoids sampled over an integer
// number of periods.
// --------------------------------------------------------------------------

inline std::complex<double> dft_fundamental(const std::vector<double>& x,
                                            const std::vector<double>& t, double w,
                                            std::size_t lo, std::size_t hi) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = lo; k < hi; ++k) {
        acc += x[k] * std::exp(std::complex<double>(0.0, -w * t[k]));
    }
    return 2.0 * acc / static_cast<double>(hi - lo);
}

// --------------------------------------------------------------------------
// Per-phase steady-state mesh solution of the output filter: an ideal source
// V_inv behind (r_f, l_f) feeding a bus capacitor c, with a grid branch
// (r_g, l_g) into emf E and an optional series RL load to neutral.
// --------------------------------------------------------------------------

struct MeshPhasors {
    std::complex<double> v_bus, i_f, i_g;
};

struct MeshParams {
    double r_f, l_f, c, r_g, l_g;
    double load_r = 0.0, load_l = 0.0;
    bool grid = true;
    bool load = false;
};

inline MeshPhasors mesh_solve(const MeshParams& m, double w, std::complex<double> v_inv,
                              std::complex<double> e_g) {
    const std::complex<double> jw(0.0, w);
    const std::complex<double> y_f = 1.0 / (m.r_f + jw * m.l_f);
    const std::complex<double> y_g = m.grid ? 1.0 / (m.r_g + jw * m.l_g)
                                            : std::complex<double>(0.0, 0.0);
    const std::complex<double> y_c = jw * m.c;
    const std::complex<double> y_l = m.load ? 1.0 / (m.load_r + jw * m.load_l)
                                            : std::complex<double>(0.0, 0.0);
    MeshPhasors out;
    out.v_bus = (v_inv * y_f + e_g * y_g) / (y_f + y_g + y_c + y_l);
    out.i_f = (v_inv - out.v_bus) * y_f;
    out.i_g = m.grid ? (out.v_bus - e_g) * y_g : std::complex<double>(0.0, 0.0);
    return out;
}

// --------------------------------------------------------------------------
// Analytic solution of the series RLC free response
//   L i' = -v - R i,   C v' = i
// from initial (i0, v0), via the complex eigenstructure.  Valid whenever the
// two eigenvalues are distinct (any underdamped circuit).
// --------------------------------------------------------------------------

struct RlcState {
    double i, v;
};

inline RlcState rlc_free_response(double r, double l, double c, double i0, double v0,
                                  double t) {
    using cd = std::complex<double>;
    // characteristic roots of lam^2 + (r/l) lam + 1/(l c) = 0
    const cd half(-0.5 * r / l, 0.0);
    const cd disc = std::sqrt(cd(0.25 * r * r / (l * l) - 1.0 / (l * c), 0.0));
    const cd l1 = half + disc;
    const cd l2 = half - disc;
    // eigenvectors (1, e_k) with e_k from C v' = i  =>  e_k = 1/(c*lam_k)
    const cd e1 = 1.0 / (c * l1);
    const cd e2 = 1.0 / (c * l2);
    // solve c1 + c2 = i0, c1 e1 + c2 e2 = v0
    const cd c2 = (cd(v0, 0.0) - e1 * i0) / (e2 - e1);
    const cd c1 = cd(i0, 0.0) - c2;
    const cd it = c1 * std::exp(l1 * t) + c2 * std::exp(l2 * t);
    const cd vt = c1 * e1 * std::exp(l1 * t) + c2 * e2 * std::exp(l2 * t);
    return RlcState{it.real(), vt.real()};
}

} // namespace oracle
