#pragma once

#include <complex>

#include "svocsim/frames.hpp"
#include "svocsim/signals.hpp"

namespace svocsim {

// Stationary-frame pair (alpha, beta) of one sequence oscillator.
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
};

// Per-phase active/reactive power setpoints (W, var).
struct PowerSetpoints {
    double p_w = 0.0;
    double q_var = 0.0;
};

// Current-error feedback split into symmetrical components.
struct SequenceFeedback {
    AlphaBeta pos;
    AlphaBeta neg;
    AlphaBeta zero;
};

struct OscParams {
    double v_n = 50.0;             // nominal rms phase voltage (V)
    double omega_n = 2.0 * 3.14159265358979323846 * 50.0; // rad/s
    double xi = 6.7e-3;            // amplitude-loop gain (1/(V^2 s))
    double k_v = 1.0;              // voltage scaling
    double k_i = 1.0;              // current scaling
    // Oscillator capacitance sets the current-feedback coupling k_v*k_i/c.
    // It is chosen so the power-synchronization rate sits well below the
    // local amplitude restoring rate; a stiffer coupling makes the amplitude
    // axis chase the grid through the (lagged) voltage loop and ring, while
    // a softer one drags out settling after a power step.
    double c_osc = 0.18;           // oscillator capacitance equivalent (F)
    double feedback_sign = -1.0;   // frozen current-error coupling convention
    int substeps = 5;              // RK4 substeps per controller tick

    double peak_v() const;         // sqrt(2)*v_n, the limit-cycle radius
    void validate() const;         // throws ConfigError
};

// Internal states of the three sequence oscillators.  All three free-run on a
// circle of radius sqrt(2)*v_n; the negative/zero reference contributions are
// the radial deviations from that circle, so they vanish in balanced
// operation.
struct SvocState {
    AlphaBeta pos;
    AlphaBeta neg;
    AlphaBeta zero;

    static SvocState nominal(const OscParams& p);
};

// Right-hand sides of the three oscillators (feedback held constant).
AlphaBeta pos_osc_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb);
AlphaBeta neg_osc_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb);
AlphaBeta zero_osc_derivatives(const OscParams& p, const AlphaBeta& v, const AlphaBeta& fb);

// Radial-deviation outputs of the negative/zero oscillators.  On the internal
// circle both are exactly (0, 0).  Throws DegenerateReference if the internal
// magnitude collapses below 1e-6 V.
AlphaBeta neg_osc_outputs(const OscParams& p, const AlphaBeta& v);
AlphaBeta zero_osc_outputs(const OscParams& p, const AlphaBeta& v);

// Combine sequence outputs into per-phase reference pairs (v_d plus lagging
// quadrature v_q).  Every sequence path feeds the q column with its own
// quarter-period-delayed pair, so v_q lags v_d per phase for any mix.
ThreePhase<PhaseReference> synthesize_references(const AlphaBeta& pos,
                                                 const AlphaBeta& neg_out,
                                                 const AlphaBeta& zero_out);

// References synthesized from the current state without stepping.
ThreePhase<PhaseReference> svoc_references(const OscParams& p, const SvocState& s);

// Instantaneous per-phase current reference pair realizing the power
// setpoints against the reference voltage pair.
QuadPair current_references(const PhaseReference& ref, const PowerSetpoints& sp);

// Split per-phase current errors (measured minus reference quadrature pairs)
// into positive/negative/zero components.  Errors are complexified as d - j*q
// (so a balanced set patterned with the references lands entirely in pos) and
// pushed through the sequence-extraction rows.
SequenceFeedback feedback_decompose(const ThreePhase<QuadPair>& i_inv,
                                    const ThreePhase<QuadPair>& i_ref);

// Resynthesize per-phase complex errors from a decomposition (test/analysis
// helper; exact inverse of feedback_decompose).
ThreePhase<std::complex<double>> feedback_resynthesize(const SequenceFeedback& fb);

// Advance all three oscillators one controller tick (RK4, feedback held) and
// return the fresh reference set.
ThreePhase<PhaseReference> svoc_step(SvocState& s, const OscParams& p,
                                     const SequenceFeedback& fb, double dt);

} // namespace svocsim
