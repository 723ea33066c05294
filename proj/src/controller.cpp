#include "svocsim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

void ControllerConfig::validate() const {
    osc.validate();
    loops.validate();
    if (!(qsg_k > 0.0)) throw ConfigError("quadrature-generator damping must be positive");
    if (!(dt > 0.0)) throw ConfigError("control period must be positive");
    if (!(setpoint_tau >= 0.0) || !std::isfinite(setpoint_tau))
        throw ConfigError("setpoint shaping time constant must be finite and non-negative");
}

namespace {

QuadPair as_pair(const SyncFrameSample& s) { return QuadPair{s.d, s.q}; }

// Offset-tracker bandwidth.  The tracker filters the generator residual
// (sample minus band-pass output), which holds no fundamental once locked,
// so the cutoff only has to sit well below the fundamental.
constexpr double kOffsetCutoffHz = 2.0;

} // namespace

SvocController::SvocController(const ControllerConfig& cfg)
    : cfg_(cfg),
      svoc_(SvocState::nominal(cfg.osc)),
      detector_(cfg.osc.v_n, cfg.osc.omega_n, cfg.dt) {
    cfg_.validate();
    prev_refs_ = svoc_references(cfg_.osc, svoc_);
    for (int ph = 0; ph < 3; ++ph) {
        v_qsg_[ph] = QsgState{cfg_.osc.omega_n, cfg_.qsg_k};
        i_qsg_[ph] = QsgState{cfg_.osc.omega_n, cfg_.qsg_k};
        // Warm-start the voltage trackers on the initial reference waveform
        // so the loops see no artificial lock-in transient at power-up.
        v_qsg_[ph].x1 = prev_refs_[ph].v_d;
        v_qsg_[ph].x2 = prev_refs_[ph].v_q;
    }
    // First-tick feedback sees zero reference current: the plant starts at
    // rest, so the first error is near zero and the start-up is gentle.
    prev_iref_ = ThreePhase<QuadPair>{};
}

void SvocController::start_from_perturbation(double v_start) {
    if (!(v_start > 1e-3)) throw ConfigError("start perturbation must exceed 1 mV");
    svoc_.pos = AlphaBeta{v_start, 0.0};
    prev_refs_ = svoc_references(cfg_.osc, svoc_);
}

SequenceAmplitudes SvocController::amplitudes() const {
    const AlphaBeta n = neg_osc_outputs(cfg_.osc, svoc_.neg);
    const AlphaBeta z = zero_osc_outputs(cfg_.osc, svoc_.zero);
    return SequenceAmplitudes{
        std::hypot(svoc_.pos.alpha, svoc_.pos.beta),
        std::hypot(n.alpha, n.beta),
        std::hypot(z.alpha, z.beta),
    };
}

ThreePhase<double> SvocController::tick(const ThreePhase<double>& v_meas,
                                        const ThreePhase<double>& i_meas) {
    if (!all_finite(v_meas) || !all_finite(i_meas))
        throw NonFiniteSample("controller received a non-finite measurement");
    const double dt = cfg_.dt;

    // Fundamental estimates with lagging quadratures, one generator per
    // phase and per quantity.  Each channel's DC offset is tracked from the
    // generator residual and removed ahead of the generator so the q outputs
    // stay offset-free (see the tracker note in the class declaration).
    ThreePhase<QuadPair> v_flt, i_flt;
    for (int ph = 0; ph < 3; ++ph) {
        v_flt[ph] = qsg_step(v_qsg_[ph], v_meas[ph] - v_dc_[ph], dt);
        i_flt[ph] = qsg_step(i_qsg_[ph], i_meas[ph] - i_dc_[ph], dt);
        lowpass_step(v_dc_[ph], v_meas[ph] - v_flt[ph].d, kOffsetCutoffHz, dt);
        lowpass_step(i_dc_[ph], i_meas[ph] - i_flt[ph].d, kOffsetCutoffHz, dt);
    }

    flags_ = detector_.update(v_meas);

    // Oscillator feedback is formed against the previous tick's references
    // so measurement and reference describe the same interval.  The pairs
    // use the raw offset-free sample on the in-phase axis: the generator lag
    // there would eat the last degrees of phase margin in the amplitude
    // power loop.  Faulty phases' measurements are replaced by healthy-phase
    // estimates before the sequence split, keeping the oscillators blind to
    // the fault.
    ThreePhase<FrameUnit> units_prev;
    ThreePhase<QuadPair> i_pairs;
    for (int ph = 0; ph < 3; ++ph) {
        units_prev[ph] = unit_direction(prev_refs_[ph]);
        i_pairs[ph] = QuadPair{i_meas[ph] - i_dc_[ph], i_flt[ph].q};
    }
    const ThreePhase<QuadPair> i_for_osc =
        cfg_.frt_enabled ? substitute_feedback(i_pairs, units_prev, flags_) : i_pairs;
    const SequenceFeedback fb = feedback_decompose(i_for_osc, prev_iref_);

    const ThreePhase<PhaseReference> refs = svoc_step(svoc_, cfg_.osc, fb, dt);

    // Walk the acting setpoints toward the commanded ones (reference shaping
    // only; the loops themselves are untouched).
    if (cfg_.setpoint_tau > 0.0) {
        const double blend = 1.0 - std::exp(-dt / cfg_.setpoint_tau);
        for (int ph = 0; ph < 3; ++ph) {
            setpoints_[ph].p_w += blend * (sp_target_[ph].p_w - setpoints_[ph].p_w);
            setpoints_[ph].q_var += blend * (sp_target_[ph].q_var - setpoints_[ph].q_var);
        }
    } else {
        setpoints_ = sp_target_;
    }

    ThreePhase<QuadPair> iref;
    ThreePhase<double> out;
    for (int ph = 0; ph < 3; ++ph) {
        iref[ph] = current_references(refs[ph], setpoints_[ph]);

        const FrameUnit unit = unit_direction(refs[ph]);
        // Loop measurements: raw instantaneous sample as the in-phase
        // component (no filter delay inside the loops) with the generated
        // quadrature as companion.
        const QuadPair v_pair{v_meas[ph] - v_dc_[ph], v_flt[ph].q};
        const QuadPair i_pair{i_meas[ph] - i_dc_[ph], i_flt[ph].q};
        const SyncFrameSample v_sync = to_sync_frame(unit, v_pair);
        const SyncFrameSample i_sync = to_sync_frame(unit, i_pair);
        const SyncFrameSample i_ff = to_sync_frame(unit, iref[ph]);

        // Amplitude trim: walk the acting voltage reference until the
        // reactive share of the inverter current matches its reference, so
        // at idle the grid (not the bridge) charges the filter capacitor.
        v_trim_[ph] += cfg_.loops.trim_gain * (i_ff.q - i_sync.q) * dt;
        v_trim_[ph] = std::clamp(v_trim_[ph], -cfg_.loops.trim_max, cfg_.loops.trim_max);
        const QuadPair v_ref{ref_magnitude(refs[ph]).d + v_trim_[ph], 0.0};

        // Flagged phases get the whole ceiling so they can ride the limit
        // and inject fault support; otherwise the correction is kept small.
        const double corr_limit = flags_[ph] ? 0.0 : cfg_.loops.i_corr_max;
        const QuadPair i_cmd = voltage_loop_step(loops_[ph], cfg_.loops, v_ref,
                                                 as_pair(v_sync), as_pair(i_ff), dt,
                                                 corr_limit);
        const QuadPair v_cmd = current_loop_step(loops_[ph], cfg_.loops, i_cmd,
                                                 as_pair(i_sync), as_pair(v_sync), dt);
        out[ph] = to_instantaneous(unit, SyncFrameSample{v_cmd.d, v_cmd.q});
        // Resonance damping: the filter rings at frequencies the loops can't
        // reach through the computation delay, so the bridge drops a virtual
        // resistance across the non-fundamental share of its own current.
        out[ph] -= cfg_.loops.r_damp * (i_meas[ph] - i_flt[ph].d);
        // Per-phase instantaneous current limit (see overcurrent_foldback).
        out[ph] = overcurrent_foldback(cfg_.loops, out[ph], v_meas[ph], i_meas[ph]);
        out[ph] = std::clamp(out[ph], -cfg_.loops.v_ceiling, cfg_.loops.v_ceiling);
    }

    prev_refs_ = refs;
    prev_iref_ = iref;
    return out;
}

} // namespace svocsim
