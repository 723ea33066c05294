#pragma once

#include "svocsim/frames.hpp"
#include "svocsim/signals.hpp"

namespace svocsim {

// Per-phase undervoltage detector: one-cycle sliding rms compared against
// hysteresis thresholds (enter below 0.85 pu, clear above 0.90 pu), with a
// one-cycle dwell before a flag flips in either direction.  A balanced
// condition (all three phases under threshold) is reported as all-healthy:
// symmetric sags need current limiting, not per-phase substitution.
class FaultDetector {
  public:
    FaultDetector(double v_nominal_rms, double omega_n, double dt);

    // Push one tick of bus-voltage samples; returns the reported flags.
    ThreePhase<bool> update(const ThreePhase<double>& v_samples);

    ThreePhase<bool> reported() const;
    ThreePhase<double> rms() const;

    static constexpr double kEnterPu = 0.85;
    static constexpr double kClearPu = 0.90;

  private:
    double v_n_;
    int dwell_ticks_;
    SlidingRms rms_a_, rms_b_, rms_c_;
    ThreePhase<bool> latched_{false, false, false};
    ThreePhase<int> pending_{0, 0, 0};
};

// Estimate the faulty phase's current pair from the two healthy ones under
// the zero-sum assumption; exactly one flag must be set.
// Throws WrongFaultCount otherwise.
QuadPair estimate_one_fault(const ThreePhase<QuadPair>& meas, const ThreePhase<bool>& faulty);

// Estimate both faulty phases' current pairs by carrying the healthy phase's
// own-frame phasor into each faulty phase's frame; exactly two flags must be
// set.  Throws WrongFaultCount otherwise.
ThreePhase<QuadPair> estimate_two_faults(const ThreePhase<QuadPair>& meas,
                                         const ThreePhase<FrameUnit>& frames,
                                         const ThreePhase<bool>& faulty);

// Replace the measured pairs of flagged phases with healthy-phase estimates.
// Zero flags (or all three, which the detector never reports) pass the
// measurements through unchanged.
ThreePhase<QuadPair> substitute_feedback(const ThreePhase<QuadPair>& meas,
                                         const ThreePhase<FrameUnit>& frames,
                                         const ThreePhase<bool>& faulty);

} // namespace svocsim
