#pragma once

#include "svocsim/signals.hpp"

namespace svocsim {

struct PiGains {
    double kp = 0.0;
    double ki = 0.0;
};

// Gains shared by every phase of the nested loops.
//
// The voltage loop is integrator-led: the bus couples to the grid through a
// mostly inductive branch, so an amplitude error is corrected by quadrature
// current that the integrators steer into over a few milliseconds.  A large
// proportional gain would instead demand in-phase current the branch cannot
// use and pin the current limiter, so kp stays small.
// The current loop's proportional gain is sized well above the classic
// bandwidth rule: with kp at 12 the PI zero falls near 170 rad/s, low enough
// to damp the slow envelope mode the voltage loop and oscillator share.
// Smaller kp leaves that mode ringing for hundreds of milliseconds.
struct LoopGains {
    PiGains voltage{0.2, 150.0};
    PiGains current{12.0, 2000.0};
    double i_limit_peak = 14.142135623730951; // current-reference clamp (A peak)
    double v_ceiling = 100.0;                 // inverter voltage clamp (V peak)
    // Virtual series resistance applied to the non-fundamental residual of
    // the inverter current.  The LC filter's resonance sits well below a
    // sixth of the control rate, where delayed inverter-current feedback
    // cannot damp it on its own; the residual-resistance term supplies the
    // missing damping without loading the fundamental.
    double r_damp = 3.0;
    // Reactive-current amplitude trim.  Holding the bus exactly at the
    // oscillator amplitude leaves the inverter feeding the filter capacitor
    // forever; letting the bus float a fraction of a percent hands that
    // charging current to the stiffer grid.  A slow integrator
    // (trim' = gain * reactive-current error, clamped) finds the float point
    // without knowing the grid impedance.  Its bandwidth sits well below the
    // synchronization mode, so power transients are untouched.
    double trim_gain = 1.5; // V per (A*s) of reactive-current error
    double trim_max = 2.0;  // authority clamp (V)
    // Per-phase instantaneous current limit (fold-back slope).  The reference
    // clamp keeps the COMMANDED current inside the limit, but frame-blind
    // shares of the realized current (estimator lag after a fault edge, and
    // in the single-oscillator baseline the whole counter-rotating component)
    // are invisible to the loops.  The bridge voltage is therefore clamped to
    // the measured bus voltage plus a headroom that shrinks linearly with the
    // raw current sample and vanishes at the limit: a phase at the limit has
    // no drive left, so the sample cannot run past it.  Far from the limit
    // the headroom is far wider than any normal command, and the clamp is
    // inert.
    double r_overcurrent = 8.0; // headroom slope, V per A below the limit
    // Correction authority of the voltage loop in normal operation (peak amps
    // added on top of the power-derived feed-forward).  In steady state the
    // loop only trims losses and capacitor current, which fits in a fraction
    // of an amp.  Leaving it the full ceiling instead lets a standing grid
    // deviation (a sag on one phase) pull rated current into restoring the
    // bus, and that single-phase current error drags the synchronization away
    // from the other phases.  Phases flagged by the fault detector get the
    // full ceiling back so they can ride the limit and inject support.
    double i_corr_max = 0.6; // A peak

    void validate() const; // throws ConfigError
};

// One PI channel with directional conditional integration: while the
// downstream clamp was active at entry to the tick, the integrator only
// accepts error that backs the command away from the clamp.  Without the
// directional let-out a transient that winds the integrator past the clamp
// level latches the loop in saturation permanently.
struct PiState {
    double integ = 0.0;
    bool saturated = false;
    double last_out = 0.0; // channel's share of the last post-clamp command

    double step(const PiGains& g, double error, double dt);
};

// Scale a pair down onto a circle of the given radius, keeping its direction.
// Returns true if clamping occurred.
bool vector_clamp(double& d, double& q, double limit);

// Both loops of one phase.
struct PhaseLoopState {
    PiState v_d, v_q; // voltage-loop integrators
    PiState c_d, c_q; // current-loop integrators
};

// Outer loop: track the reference voltage pair, emitting a current command.
// i_ff is the feed-forward share of the command (the power-derived current
// reference); the clamp applies to the summed command.  correction_limit, if
// positive, additionally bounds the PI contribution alone (the normal-mode
// authority cap); zero means the PI share may use the whole ceiling.
QuadPair voltage_loop_step(PhaseLoopState& st, const LoopGains& g,
                           const QuadPair& v_ref, const QuadPair& v_meas,
                           const QuadPair& i_ff, double dt,
                           double correction_limit = 0.0);

// Inner loop: track the commanded current pair, emitting the inverter bridge
// voltage command.  v_ff is the feed-forward share (the measured bus
// voltage); the ceiling clamp applies to the summed command.
QuadPair current_loop_step(PhaseLoopState& st, const LoopGains& g,
                           const QuadPair& i_cmd, const QuadPair& i_meas,
                           const QuadPair& v_ff, double dt);

// Per-phase instantaneous current limit: clamp one phase's bridge voltage to
// the measured bus voltage plus a headroom of r_overcurrent volts per amp of
// remaining margin to i_limit_peak (see the note on r_overcurrent).
double overcurrent_foldback(const LoopGains& g, double v_bridge, double v_bus,
                            double i_raw);

} // namespace svocsim
