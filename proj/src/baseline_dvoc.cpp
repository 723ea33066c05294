#include "svocsim/baseline_dvoc.hpp"

#include <algorithm>
#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

namespace {

constexpr double kRoot3 = 1.7320508075688772935274463415059;
constexpr double kMinMagnitude = 1e-6;

QuadPair as_pair(const SyncFrameSample& s) { return QuadPair{s.d, s.q}; }

// A clockwise-rotating two-axis pair (x, y) has lagging quadrature -y, so the
// frame machinery sees (x, -y).
QuadPair lagging_pair(const AlphaBeta& v) { return QuadPair{v.alpha, -v.beta}; }

} // namespace

AlphaBeta clarke(const ThreePhase<double>& abc) {
    return AlphaBeta{
        (2.0 * abc.a - abc.b - abc.c) / 3.0,
        (abc.b - abc.c) / kRoot3,
    };
}

ThreePhase<double> inverse_clarke(const AlphaBeta& ab) {
    const double half_b = 0.5 * kRoot3 * ab.beta;
    return ThreePhase<double>{
        ab.alpha,
        -0.5 * ab.alpha + half_b,
        -0.5 * ab.alpha - half_b,
    };
}

AlphaBeta dvoc_current_reference(const AlphaBeta& v, const PowerSetpoints& per_phase) {
    const double v2 = v.alpha * v.alpha + v.beta * v.beta;
    if (v2 < kMinMagnitude * kMinMagnitude) throw DegenerateReference(std::sqrt(v2));
    const double scale = 2.0 / v2;
    return AlphaBeta{
        scale * (per_phase.p_w * v.alpha - per_phase.q_var * v.beta),
        scale * (per_phase.p_w * v.beta + per_phase.q_var * v.alpha),
    };
}

DvocController::DvocController(const ControllerConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    osc_ = AlphaBeta{cfg_.osc.peak_v(), 0.0};
    for (int ph = 0; ph < 3; ++ph) i_qsg_[ph] = QsgState{cfg_.osc.omega_n, cfg_.qsg_k};
}

void DvocController::set_setpoints(const ThreePhase<PowerSetpoints>& sp) {
    sp_target_ = PowerSetpoints{(sp.a.p_w + sp.b.p_w + sp.c.p_w) / 3.0,
                                (sp.a.q_var + sp.b.q_var + sp.c.q_var) / 3.0};
    if (!sp_primed_) { per_phase_ = sp_target_; sp_primed_ = true; }
}

SequenceAmplitudes DvocController::amplitudes() const {
    return SequenceAmplitudes{std::hypot(osc_.alpha, osc_.beta), 0.0, 0.0};
}

ThreePhase<double> DvocController::tick(const ThreePhase<double>& v_meas,
                                        const ThreePhase<double>& i_meas) {
    if (!all_finite(v_meas) || !all_finite(i_meas))
        throw NonFiniteSample("controller received a non-finite measurement");
    const double dt = cfg_.dt;
    const double sigma = cfg_.osc.feedback_sign;

    // Same setpoint shaping as the per-sequence design: soften the reference
    // kick so a step does not ring the power-swing mode.
    if (cfg_.setpoint_tau > 0.0) {
        const double blend = 1.0 - std::exp(-dt / cfg_.setpoint_tau);
        per_phase_.p_w += blend * (sp_target_.p_w - per_phase_.p_w);
        per_phase_.q_var += blend * (sp_target_.q_var - per_phase_.q_var);
    } else {
        per_phase_ = sp_target_;
    }

    // Aggregate current error against the previous tick's reference, scaled
    // by the frozen coupling convention.
    const AlphaBeta i_ab = clarke(i_meas);
    const AlphaBeta fb{sigma * (i_ab.alpha - prev_iref_.alpha),
                       sigma * (i_ab.beta - prev_iref_.beta)};

    // Same limit-cycle core as the per-sequence design, but the whole
    // controller is this single oscillator.  Feedback is pre-scaled, so the
    // derivative helper is called with sign already applied.
    const double h = dt / static_cast<double>(cfg_.osc.substeps);
    for (int i = 0; i < cfg_.osc.substeps; ++i) {
        const AlphaBeta k1 = pos_osc_derivatives(cfg_.osc, osc_, fb);
        const AlphaBeta m1{osc_.alpha + 0.5 * h * k1.alpha, osc_.beta + 0.5 * h * k1.beta};
        const AlphaBeta k2 = pos_osc_derivatives(cfg_.osc, m1, fb);
        const AlphaBeta m2{osc_.alpha + 0.5 * h * k2.alpha, osc_.beta + 0.5 * h * k2.beta};
        const AlphaBeta k3 = pos_osc_derivatives(cfg_.osc, m2, fb);
        const AlphaBeta m3{osc_.alpha + h * k3.alpha, osc_.beta + h * k3.beta};
        const AlphaBeta k4 = pos_osc_derivatives(cfg_.osc, m3, fb);
        osc_.alpha += h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
        osc_.beta += h / 6.0 * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta);
    }

    const AlphaBeta iref = dvoc_current_reference(osc_, per_phase_);

    // One shared pair of loops in the aggregate frame.
    const PhaseReference ref{osc_.alpha, -osc_.beta};
    const FrameUnit unit = unit_direction(ref);
    const SyncFrameSample v_sync = to_sync_frame(unit, lagging_pair(clarke(v_meas)));
    const SyncFrameSample i_sync = to_sync_frame(unit, lagging_pair(i_ab));
    const SyncFrameSample i_ff = to_sync_frame(unit, lagging_pair(iref));

    // Same reactive-current amplitude trim as the per-sequence design: float
    // the bus until the grid, not the bridge, charges the filter capacitor.
    v_trim_ += cfg_.loops.trim_gain * (i_ff.q - i_sync.q) * dt;
    v_trim_ = std::clamp(v_trim_, -cfg_.loops.trim_max, cfg_.loops.trim_max);
    const QuadPair v_ref{ref_magnitude(ref).d + v_trim_, 0.0};

    const QuadPair i_cmd = voltage_loop_step(loop_, cfg_.loops, v_ref,
                                             as_pair(v_sync), as_pair(i_ff), dt);
    const QuadPair v_cmd = current_loop_step(loop_, cfg_.loops, i_cmd,
                                             as_pair(i_sync), as_pair(v_sync), dt);

    const QuadPair v_ab_pair = from_sync_frame(unit, SyncFrameSample{v_cmd.d, v_cmd.q});
    const AlphaBeta v_ab{v_ab_pair.d, -v_ab_pair.q};

    prev_iref_ = iref;
    ThreePhase<double> out = inverse_clarke(v_ab);
    // Same resonance damping as the per-phase design: virtual resistance
    // across the non-fundamental share of the inverter current.
    for (int ph = 0; ph < 3; ++ph) {
        const QuadPair i_flt = qsg_step(i_qsg_[ph], i_meas[ph], dt);
        out[ph] -= cfg_.loops.r_damp * (i_meas[ph] - i_flt.d);
        // Per-phase instantaneous current limit, as in the per-sequence
        // design.  The shared dq clamp cannot bound individual phases under
        // unbalance (the counter-rotating current component is invisible in
        // the single frame), so each phase folds its bridge voltage back
        // toward the bus as the raw sample approaches the limit.
        out[ph] = overcurrent_foldback(cfg_.loops, out[ph], v_meas[ph], i_meas[ph]);
        out[ph] = std::clamp(out[ph], -cfg_.loops.v_ceiling, cfg_.loops.v_ceiling);
    }
    return out;
}

} // namespace svocsim
