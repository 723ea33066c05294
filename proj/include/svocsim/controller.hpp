#pragma once

#include "svocsim/frames.hpp"
#include "svocsim/frt.hpp"
#include "svocsim/nested_control.hpp"
#include "svocsim/signals.hpp"
#include "svocsim/svoc.hpp"

namespace svocsim {

// Magnitudes of the three sequence contributions to the reference set: the
// positive oscillator's radius and the negative/zero radial-deviation
// outputs (both zero in balanced operation).
struct SequenceAmplitudes {
    double pos = 0.0;
    double neg = 0.0;
    double zero = 0.0;
};

// Interface the runner drives: one tick per control period, measurements in,
// bridge voltage commands out.
class Controller {
  public:
    virtual ~Controller() = default;

    virtual ThreePhase<double> tick(const ThreePhase<double>& v_meas,
                                    const ThreePhase<double>& i_meas) = 0;

    // Per-phase power setpoints (equal-split callers divide totals by three).
    virtual void set_setpoints(const ThreePhase<PowerSetpoints>& sp) = 0;

    virtual ThreePhase<bool> fault_flags() const = 0;
    virtual SequenceAmplitudes amplitudes() const = 0;
};

struct ControllerConfig {
    OscParams osc;
    LoopGains loops;
    double qsg_k = 1.4142135623730951; // quadrature-generator damping
    bool frt_enabled = true;           // gate the feedback substitution
    double dt = 5.0e-5;                // control period (s)
    // First-order shaping of setpoint changes ahead of the current
    // feed-forward.  An unshaped step kicks the lightly damped power-swing
    // mode; 30 ms of shaping removes most of the kick energy there while
    // costing little of the settling budget.  Zero disables shaping.
    double setpoint_tau = 0.03;

    void validate() const; // throws ConfigError
};

class SvocController final : public Controller {
  public:
    explicit SvocController(const ControllerConfig& cfg);

    ThreePhase<double> tick(const ThreePhase<double>& v_meas,
                            const ThreePhase<double>& i_meas) override;
    void set_setpoints(const ThreePhase<PowerSetpoints>& sp) override {
        sp_target_ = sp;
        if (!sp_primed_) { setpoints_ = sp; sp_primed_ = true; }
    }
    ThreePhase<bool> fault_flags() const override { return flags_; }
    SequenceAmplitudes amplitudes() const override;

    // Start the oscillators from a small perturbation instead of the nominal
    // operating point, demonstrating self-starting growth onto the limit
    // cycle.  Only the positive oscillator is collapsed; the deviation
    // oscillators stay at rest on their circle so the references remain a
    // usable (if tiny) balanced set.
    void start_from_perturbation(double v_start);

    const ThreePhase<PhaseReference>& references() const { return prev_refs_; }

  private:
    ControllerConfig cfg_;
    SvocState svoc_;
    ThreePhase<QsgState> v_qsg_;
    ThreePhase<QsgState> i_qsg_;
    // Slow per-channel trackers of measurement DC.  The quadrature generator
    // passes an input offset into its q output with gain k, and the rotating
    // frame hands that leak to the current integrator as a negative
    // resistance (-ki*k/omega_n, stronger than kp), so offsets must be
    // removed before the loops see the samples.
    ThreePhase<double> v_dc_{};
    ThreePhase<double> i_dc_{};
    FaultDetector detector_;
    ThreePhase<PhaseLoopState> loops_;
    ThreePhase<double> v_trim_{}; // reactive-current amplitude trim (V)
    ThreePhase<PowerSetpoints> setpoints_; // shaped values the loops act on
    ThreePhase<PowerSetpoints> sp_target_; // latest commanded values
    bool sp_primed_ = false;               // first command is taken verbatim
    ThreePhase<PhaseReference> prev_refs_;
    ThreePhase<QuadPair> prev_iref_;
    ThreePhase<bool> flags_{false, false, false};
};

} // namespace svocsim
