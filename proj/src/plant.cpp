#include "svocsim/plant.hpp"

#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

namespace {

constexpr double kTwoThirdsPi = 2.0 * 3.14159265358979323846 / 3.0;

ThreePhase<double> remove_common_mode(const ThreePhase<double>& v) {
    const double mean = (v.a + v.b + v.c) / 3.0;
    return ThreePhase<double>{v.a - mean, v.b - mean, v.c - mean};
}

} // namespace

void PlantParams::validate() const {
    if (!(l_f > 0.0) || !(l_g > 0.0)) throw ConfigError("inductances must be positive");
    if (!(c_f > 0.0)) throw ConfigError("filter capacitance must be positive");
    if (c_g < 0.0) throw ConfigError("bus capacitance must be non-negative");
    if (r_f < 0.0 || r_g < 0.0) throw ConfigError("series resistances must be non-negative");
    if (load_r < 0.0 || load_l < 0.0) throw ConfigError("load parameters must be non-negative");
    if (has_load() && !(load_l > 0.0))
        throw ConfigError("local load needs inductance to form a state");
    if (!(v_ng > 0.0)) throw ConfigError("grid voltage must be positive");
    if (!(omega_g > 0.0)) throw ConfigError("grid frequency must be positive");
}

void validate_events(const std::vector<GridEvent>& events) {
    for (const GridEvent& e : events) {
        if (!(e.t_end > e.t_start))
            throw ConfigError("grid event must end after it starts");
        for (int ph = 0; ph < 3; ++ph) {
            const double s = e.scale[ph];
            if (!(s >= 0.0) || !(s <= 1.2))
                throw ConfigError("grid event scale must lie in [0, 1.2]");
        }
    }
    // Two events may coexist in time only if they touch disjoint phases.
    for (size_t i = 0; i < events.size(); ++i) {
        for (size_t j = i + 1; j < events.size(); ++j) {
            const GridEvent& x = events[i];
            const GridEvent& y = events[j];
            const bool overlap_t = x.t_start < y.t_end && y.t_start < x.t_end;
            if (!overlap_t) continue;
            for (int ph = 0; ph < 3; ++ph) {
                if (x.scale[ph] != 1.0 && y.scale[ph] != 1.0) throw OverlappingEvents();
            }
        }
    }
}

PlantState PlantState::at_grid(const PlantParams& p) {
    PlantState s;
    if (p.grid_connected) s.v_cf = grid_emf(p, {}, 0.0);
    s.t = 0.0;
    return s;
}

ThreePhase<double> grid_emf(const PlantParams& p, const std::vector<GridEvent>& events,
                            double t) {
    const double amp = std::sqrt(2.0) * p.v_ng;
    // Phase order matches the synthesized references: b leads a by a third of
    // a period, c trails by the same amount.
    ThreePhase<double> e{
        amp * std::cos(p.omega_g * t),
        amp * std::cos(p.omega_g * t + kTwoThirdsPi),
        amp * std::cos(p.omega_g * t - kTwoThirdsPi),
    };
    for (const GridEvent& ev : events) {
        if (t >= ev.t_start && t < ev.t_end) {
            e.a *= ev.scale.a;
            e.b *= ev.scale.b;
            e.c *= ev.scale.c;
        }
    }
    if (p.three_wire) e = remove_common_mode(e);
    return e;
}

void plant_derivatives(const PlantParams& p, const PlantState& s,
                       const ThreePhase<double>& v_inv, const ThreePhase<double>& e_grid,
                       PlantState& dsdt) {
    const double c_bus = p.c_f + p.c_g;
    for (int ph = 0; ph < 3; ++ph) {
        const double il = s.i_lf[ph];
        const double vc = s.v_cf[ph];
        const double ig = s.i_lg[ph];
        const double iz = s.i_load[ph];
        dsdt.i_lf[ph] = (v_inv[ph] - vc - p.r_f * il) / p.l_f;
        dsdt.v_cf[ph] = (il - (p.grid_connected ? ig : 0.0) - (p.has_load() ? iz : 0.0)) / c_bus;
        dsdt.i_lg[ph] = p.grid_connected ? (vc - e_grid[ph] - p.r_g * ig) / p.l_g : 0.0;
        dsdt.i_load[ph] = p.has_load() ? (vc - p.load_r * iz) / p.load_l : 0.0;
    }
    dsdt.t = 1.0;
}

namespace {

void axpy(PlantState& y, double a, const PlantState& x) {
    for (int ph = 0; ph < 3; ++ph) {
        y.i_lf[ph] += a * x.i_lf[ph];
        y.v_cf[ph] += a * x.v_cf[ph];
        y.i_lg[ph] += a * x.i_lg[ph];
        y.i_load[ph] += a * x.i_load[ph];
    }
    y.t += a * x.t;
}

PlantState shifted(const PlantState& s, double a, const PlantState& d) {
    PlantState r = s;
    axpy(r, a, d);
    return r;
}

} // namespace

void plant_step_rk4(PlantState& s, const PlantParams& p, const std::vector<GridEvent>& events,
                    const ThreePhase<double>& v_inv, double dt) {
    const ThreePhase<double> v_app = p.three_wire ? remove_common_mode(v_inv) : v_inv;

    PlantState k1, k2, k3, k4;
    plant_derivatives(p, s, v_app, grid_emf(p, events, s.t), k1);
    const PlantState s2 = shifted(s, 0.5 * dt, k1);
    plant_derivatives(p, s2, v_app, grid_emf(p, events, s.t + 0.5 * dt), k2);
    const PlantState s3 = shifted(s, 0.5 * dt, k2);
    plant_derivatives(p, s3, v_app, grid_emf(p, events, s.t + 0.5 * dt), k3);
    const PlantState s4 = shifted(s, dt, k3);
    plant_derivatives(p, s4, v_app, grid_emf(p, events, s.t + dt), k4);

    axpy(s, dt / 6.0, k1);
    axpy(s, dt / 3.0, k2);
    axpy(s, dt / 3.0, k3);
    axpy(s, dt / 6.0, k4);

    if (!all_finite(s.i_lf) || !all_finite(s.v_cf) || !all_finite(s.i_lg) ||
        !all_finite(s.i_load))
        throw NonFiniteSample("plant state left the finite range");
}

} // namespace svocsim
