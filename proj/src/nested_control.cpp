#include "svocsim/nested_control.hpp"

#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

void LoopGains::validate() const {
    if (voltage.kp < 0.0 || voltage.ki < 0.0 || current.kp < 0.0 || current.ki < 0.0)
        throw ConfigError("loop gains must be non-negative");
    if (!(voltage.kp > 0.0) || !(current.kp > 0.0))
        throw ConfigError("proportional gains must be positive");
    if (!(i_limit_peak > 0.0)) throw ConfigError("current limit must be positive");
    if (!(v_ceiling > 0.0)) throw ConfigError("voltage ceiling must be positive");
    if (!(r_damp >= 0.0) || !std::isfinite(r_damp))
        throw ConfigError("damping resistance must be finite and non-negative");
    if (!(trim_gain >= 0.0) || !std::isfinite(trim_gain))
        throw ConfigError("trim gain must be finite and non-negative");
    if (!(trim_max >= 0.0) || !std::isfinite(trim_max))
        throw ConfigError("trim authority must be finite and non-negative");
    if (!(r_overcurrent >= 0.0) || !std::isfinite(r_overcurrent))
        throw ConfigError("overcurrent resistance must be finite and non-negative");
    if (!(i_corr_max >= 0.0) || !std::isfinite(i_corr_max))
        throw ConfigError("correction authority must be finite and non-negative");
}

double PiState::step(const PiGains& g, double error, double dt) {
    // Conditional integration, directional: while the downstream clamp was
    // active at entry, the integrator may only move away from the clamp
    // (error opposing the last emitted command), never deeper into it.
    if (!saturated || error * last_out < 0.0) integ += g.ki * error * dt;
    return g.kp * error + integ;
}

bool vector_clamp(double& d, double& q, double limit) {
    const double mag = std::hypot(d, q);
    if (mag <= limit) return false;
    const double scale = limit / mag;
    d *= scale;
    q *= scale;
    return true;
}

QuadPair voltage_loop_step(PhaseLoopState& st, const LoopGains& g,
                           const QuadPair& v_ref, const QuadPair& v_meas,
                           const QuadPair& i_ff, double dt,
                           double correction_limit) {
    QuadPair corr{
        st.v_d.step(g.voltage, v_ref.d - v_meas.d, dt),
        st.v_q.step(g.voltage, v_ref.q - v_meas.q, dt),
    };
    // Bound the correction share on its own before adding the feed-forward,
    // so a persistent voltage error can only divert a capped slice of the
    // ceiling away from the commanded power.
    bool clamped = false;
    if (correction_limit > 0.0) {
        clamped = vector_clamp(corr.d, corr.q, correction_limit);
    }
    QuadPair cmd{i_ff.d + corr.d, i_ff.q + corr.q};
    clamped = vector_clamp(cmd.d, cmd.q, g.i_limit_peak) || clamped;
    st.v_d.saturated = clamped;
    st.v_q.saturated = clamped;
    st.v_d.last_out = cmd.d;
    st.v_q.last_out = cmd.q;
    return cmd;
}

QuadPair current_loop_step(PhaseLoopState& st, const LoopGains& g,
                           const QuadPair& i_cmd, const QuadPair& i_meas,
                           const QuadPair& v_ff, double dt) {
    QuadPair cmd{
        v_ff.d + st.c_d.step(g.current, i_cmd.d - i_meas.d, dt),
        v_ff.q + st.c_q.step(g.current, i_cmd.q - i_meas.q, dt),
    };
    const bool clamped = vector_clamp(cmd.d, cmd.q, g.v_ceiling);
    st.c_d.saturated = clamped;
    st.c_q.saturated = clamped;
    st.c_d.last_out = cmd.d;
    st.c_q.last_out = cmd.q;
    return cmd;
}

double overcurrent_foldback(const LoopGains& g, double v_bridge, double v_bus,
                            double i_raw) {
    // Bounds are always ordered (they differ by 2 * r * i_limit) and recede
    // far beyond any normal command when the sample is well inside the limit.
    const double hi = v_bus + g.r_overcurrent * (g.i_limit_peak - i_raw);
    const double lo = v_bus - g.r_overcurrent * (g.i_limit_peak + i_raw);
    return std::clamp(v_bridge, lo, hi);
}

} // namespace svocsim
