#pragma once

#include "svocsim/controller.hpp"

namespace svocsim {

// Stationary-frame two-axis projection of three phase samples
// (amplitude-invariant: a balanced set of peak A maps to a circle of
// radius A).
AlphaBeta clarke(const ThreePhase<double>& abc);
ThreePhase<double> inverse_clarke(const AlphaBeta& ab);

// Two-axis current reference realizing per-phase setpoints against the
// oscillator voltage.  Throws DegenerateReference if the voltage collapses.
AlphaBeta dvoc_current_reference(const AlphaBeta& v, const PowerSetpoints& per_phase);

// Reference baseline: one aggregate oscillator in the two-axis frame with a
// single shared pair of nested loops.  It has no sequence decomposition, no
// per-phase frames, and no fault estimator, so unbalanced faults drag every
// phase down together -- the behaviour the per-phase design exists to fix.
class DvocController final : public Controller {
  public:
    explicit DvocController(const ControllerConfig& cfg);

    ThreePhase<double> tick(const ThreePhase<double>& v_meas,
                            const ThreePhase<double>& i_meas) override;
    // The aggregate oscillator cannot split powers per phase; the mean
    // setpoint drives every phase.
    void set_setpoints(const ThreePhase<PowerSetpoints>& sp) override;
    ThreePhase<bool> fault_flags() const override { return {false, false, false}; }
    SequenceAmplitudes amplitudes() const override;

  private:
    ControllerConfig cfg_;
    AlphaBeta osc_;
    PhaseLoopState loop_;
    PowerSetpoints per_phase_{};   // shaped values the loops act on
    PowerSetpoints sp_target_{};   // latest commanded mean
    bool sp_primed_ = false;       // first command is taken verbatim
    double v_trim_ = 0.0;          // reactive-current amplitude trim (V)
    AlphaBeta prev_iref_{};
    ThreePhase<QsgState> i_qsg_{};
};

} // namespace svocsim
