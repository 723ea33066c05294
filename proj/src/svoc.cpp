#include "svocsim/svoc.hpp"

#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

namespace {

constexpr double kMinMagnitude = 1e-6;

// Sequence-extraction rotation: one third of a turn, counter-clockwise in the
// complex plane used for decomposition.
const std::complex<double> kRot{-0.5, 0.8660254037844386467637231707529362};

} // namespace

double OscParams::peak_v() const { return std::sqrt(2.0) * v_n; }

void OscParams::validate() const {
    if (!(v_n > 0.0)) throw ConfigError("nominal voltage must be positive");
    if (!(omega_n > 0.0)) throw ConfigError("nominal frequency must be positive");
    if (!(xi > 0.0)) throw ConfigError("amplitude gain must be positive");
    if (!(k_v > 0.0) || !(k_i > 0.0)) throw ConfigError("scaling gains must be positive");
    if (!(c_osc > 0.0)) throw ConfigError("oscillator capacitance must be positive");
    if (feedback_sign != 1.0 && feedback_sign != -1.0)
        throw ConfigError("feedback sign convention must be +1 or -1");
    if (substeps < 1) throw ConfigError("substep count must be at least 1");
    // Keep the amplitude dynamics well below the oscillation frequency so the
    // circular limit cycle stays an accurate description of the trajectory.
    const double amp_rate = xi * 2.0 * v_n * v_n / (k_v * k_v);
    if (amp_rate >= omega_n / 5.0)
        throw ConfigError("amplitude-loop rate too fast relative to line frequency");
}

SvocState SvocState::nominal(const OscParams& p) {
    const double r = p.peak_v();
    return SvocState{{r, 0.0}, {r, 0.0}, {r, 0.0}};
}

namespace {

// Shared Andronov-Hopf core: radial relaxation toward radius sqrt(2)*v_n plus
// clockwise rotation at omega_n.  `fb_alpha_from_beta` selects which feedback
// component enters the alpha equation with which sign; the beta equation then
// uses the other component so the injection stays a pure rotation of fb.
AlphaBeta hopf_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb,
                           double fb_beta_sign) {
    const double peak2 = 2.0 * p.v_n * p.v_n;
    const double r2 = v.alpha * v.alpha + v.beta * v.beta;
    const double g = p.xi / (p.k_v * p.k_v) * (peak2 - r2);
    const double kcur = p.k_v * p.k_i / p.c_osc;
    return AlphaBeta{
        g * v.alpha + p.omega_n * v.beta + kcur * fb_beta_sign * fb.beta,
        g * v.beta - p.omega_n * v.alpha - kcur * fb.alpha,
    };
}

} // namespace

AlphaBeta pos_osc_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb) {
    return hopf_derivatives(p, v, fb, +1.0);
}

AlphaBeta neg_osc_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb) {
    return hopf_derivatives(p, v, fb, -1.0);
}

AlphaBeta zero_osc_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb) {
    return hopf_derivatives(p, v, fb, +1.0);
}

namespace {

AlphaBeta radial_deviation(const OscParams& p, const AlphaBeta& v, double beta_sign) {
    const double r = std::hypot(v.alpha, v.beta);
    if (r < kMinMagnitude) throw DegenerateReference(r);
    const double m = (r - p.peak_v()) / r;
    return AlphaBeta{m * v.alpha, beta_sign * m * v.beta};
}

} // namespace

AlphaBeta neg_osc_outputs(const OscParams& p, const AlphaBeta& v) {
    // Beta is negated on the way out, turning the internally counter-rotating
    // convention into a genuinely reversed-sequence contribution.
    return radial_deviation(p, v, -1.0);
}

AlphaBeta zero_osc_outputs(const OscParams& p, const AlphaBeta& v) {
    return radial_deviation(p, v, +1.0);
}

ThreePhase<PhaseReference> synthesize_references(const AlphaBeta& pos,
                                                 const AlphaBeta& neg_out,
                                                 const AlphaBeta& zero_out) {
    // Projection rows of the balanced three-phase map (phase a aligned with
    // alpha; b and c a third of a turn away on either side).
    constexpr double kHalf = 0.5;
    constexpr double kRoot3Half = 0.8660254037844386467637231707529362;
    const double rows[3][2] = {
        {1.0, 0.0},
        {-kHalf, kRoot3Half},
        {-kHalf, -kRoot3Half},
    };

    ThreePhase<PhaseReference> out;
    for (int ph = 0; ph < 3; ++ph) {
        const double ra = rows[ph][0];
        const double rb = rows[ph][1];
        // Direct components: each sequence pair projected as-is (zero-sequence
        // broadcasts its alpha to every phase).
        const double d = ra * pos.alpha + rb * pos.beta
                       + ra * neg_out.alpha + rb * neg_out.beta
                       + zero_out.alpha;
        // Quadrature components: the same projections applied to each pair
        // delayed by a quarter period.  Under clockwise rotation a quarter-
        // period delay maps (x, y) -> (-y, x) for the positive pair, and the
        // mirrored counterparts for the reversed/common-mode pairs.
        const double q = ra * (-pos.beta) + rb * pos.alpha
                       + ra * neg_out.beta + rb * (-neg_out.alpha)
                       + (-zero_out.beta);
        out[ph] = PhaseReference{d, q};
    }
    return out;
}

ThreePhase<PhaseReference> svoc_references(const OscParams& p, const SvocState& s) {
    return synthesize_references(s.pos, neg_osc_outputs(p, s.neg), zero_osc_outputs(p, s.zero));
}

QuadPair current_references(const PhaseReference& ref, const PowerSetpoints& sp) {
    const double v2 = ref.v_d * ref.v_d + ref.v_q * ref.v_q;
    if (v2 < kMinMagnitude * kMinMagnitude) throw DegenerateReference(std::sqrt(v2));
    const double scale = 2.0 / v2;
    return QuadPair{
        scale * (sp.p_w * ref.v_d + sp.q_var * ref.v_q),
        scale * (sp.p_w * ref.v_q - sp.q_var * ref.v_d),
    };
}

SequenceFeedback feedback_decompose(const ThreePhase<QuadPair>& i_inv,
                                    const ThreePhase<QuadPair>& i_ref) {
    std::complex<double> z[3];
    for (int ph = 0; ph < 3; ++ph) {
        // Complexify each phase error as d - j*q: with q lagging d by a
        // quarter period this makes a balanced error set patterned like the
        // references land entirely in the positive component.
        z[ph] = std::complex<double>(i_inv[ph].d - i_ref[ph].d,
                                     -(i_inv[ph].q - i_ref[ph].q));
    }
    const std::complex<double> a1 = kRot;
    const std::complex<double> a2 = kRot * kRot;
    const std::complex<double> pos = (z[0] + a1 * z[1] + a2 * z[2]) / 3.0;
    const std::complex<double> neg = (z[0] + a2 * z[1] + a1 * z[2]) / 3.0;
    const std::complex<double> zero = (z[0] + z[1] + z[2]) / 3.0;
    return SequenceFeedback{
        {pos.real(), pos.imag()},
        {neg.real(), neg.imag()},
        {zero.real(), zero.imag()},
    };
}

ThreePhase<std::complex<double>> feedback_resynthesize(const SequenceFeedback& fb) {
    const std::complex<double> p{fb.pos.alpha, fb.pos.beta};
    const std::complex<double> n{fb.neg.alpha, fb.neg.beta};
    const std::complex<double> zr{fb.zero.alpha, fb.zero.beta};
    const std::complex<double> a1 = kRot;
    const std::complex<double> a2 = kRot * kRot;
    ThreePhase<std::complex<double>> out;
    out.a = zr + p + n;
    out.b = zr + a2 * p + a1 * n;
    out.c = zr + a1 * p + a2 * n;
    return out;
}

namespace {

template <typename Deriv>
void rk4_advance(const OscParams& p, AlphaBeta& v, const AlphaBeta& fb, double h, Deriv deriv) {
    const AlphaBeta k1 = deriv(p, v, fb);
    const AlphaBeta mid1{v.alpha + 0.5 * h * k1.alpha, v.beta + 0.5 * h * k1.beta};
    const AlphaBeta k2 = deriv(p, mid1, fb);
    const AlphaBeta mid2{v.alpha + 0.5 * h * k2.alpha, v.beta + 0.5 * h * k2.beta};
    const AlphaBeta k3 = deriv(p, mid2, fb);
    const AlphaBeta end{v.alpha + h * k3.alpha, v.beta + h * k3.beta};
    const AlphaBeta k4 = deriv(p, end, fb);
    v.alpha += h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
    v.beta += h / 6.0 * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta);
}

} // namespace

ThreePhase<PhaseReference> svoc_step(SvocState& s, const OscParams& p,
                                     const SequenceFeedback& fb, double dt) {
    const double sigma = p.feedback_sign;
    const AlphaBeta fb_pos{sigma * fb.pos.alpha, sigma * fb.pos.beta};
    // The reversed-sequence oscillator counter-rotates internally, so its
    // feedback enters mirrored (beta negated) to follow the output mapping.
    const AlphaBeta fb_neg{sigma * fb.neg.alpha, -sigma * fb.neg.beta};
    const AlphaBeta fb_zero{sigma * fb.zero.alpha, sigma * fb.zero.beta};

    const double h = dt / static_cast<double>(p.substeps);
    for (int i = 0; i < p.substeps; ++i) {
        rk4_advance(p, s.pos, fb_pos, h, pos_osc_derivatives);
        rk4_advance(p, s.neg, fb_neg, h, neg_osc_derivatives);
        rk4_advance(p, s.zero, fb_zero, h, zero_osc_derivatives);
    }
    return svoc_references(p, s);
}

} // namespace svocsim
