#pragma once

#include <vector>

#include "svocsim/signals.hpp"

namespace svocsim {

// Electrical parameters of the per-phase LCL coupling network, grid source,
// and optional local load.  The shunt capacitance seen at the measurement bus
// is c_f + c_g.
struct PlantParams {
    double l_f = 2.0e-3;   // inverter-side inductance (H)
    double c_f = 20.0e-6;  // filter capacitance (F)
    double l_g = 2.0e-3;   // grid-side inductance (H)
    double r_f = 0.05;     // inverter-side series resistance (ohm)
    double r_g = 0.05;     // grid-side series resistance (ohm)
    double c_g = 0.0;      // extra bus capacitance (F)
    double load_r = 0.0;   // series R of local RL load; 0 disables the load
    double load_l = 0.0;   // series L of local RL load (H)
    double v_ng = 50.0;    // grid nominal rms phase voltage (V)
    double omega_g = 2.0 * 3.14159265358979323846 * 50.0; // grid frequency
    bool three_wire = false; // remove common mode at both voltage sources
    bool grid_connected = true; // open the grid branch to island the bus

    bool has_load() const { return load_r > 0.0 || load_l > 0.0; }
    void validate() const; // throws ConfigError
};

// Timed per-phase amplitude scaling of the grid source, active on
// [t_start, t_end).  Scales are dimensionless multipliers of the nominal
// amplitude.
struct GridEvent {
    double t_start = 0.0;
    double t_end = 0.0;
    ThreePhase<double> scale{1.0, 1.0, 1.0};
};

// Throws ConfigError / OverlappingEvents if any event is malformed or two
// events scale the same phase at the same instant.
void validate_events(const std::vector<GridEvent>& events);

struct PlantState {
    ThreePhase<double> i_lf{};   // inverter-side inductor currents (A)
    ThreePhase<double> v_cf{};   // bus capacitor voltages (V)
    ThreePhase<double> i_lg{};   // grid-side inductor currents (A)
    ThreePhase<double> i_load{}; // local load currents (A)
    double t = 0.0;

    // Rest at t = 0 except the bus capacitors, which start on the grid
    // voltage so the first samples are already sinusoidal.
    static PlantState at_grid(const PlantParams& p);
};

// Instantaneous grid source voltages at time t with events applied.
ThreePhase<double> grid_emf(const PlantParams& p, const std::vector<GridEvent>& events, double t);

// State derivatives for a given applied inverter voltage (zero-order held)
// and grid source voltage.
void plant_derivatives(const PlantParams& p, const PlantState& s,
                       const ThreePhase<double>& v_inv, const ThreePhase<double>& e_grid,
                       PlantState& dsdt);

// Advance the network by dt with classical RK4, sampling the grid source at
// the RK4 stage times.  The inverter voltage is held constant across the
// step.  Throws NonFiniteSample if the state leaves the finite range.
void plant_step_rk4(PlantState& s, const PlantParams& p, const std::vector<GridEvent>& events,
                    const ThreePhase<double>& v_inv, double dt);

// Measurements exposed to the controller.
inline const ThreePhase<double>& inverter_currents(const PlantState& s) { return s.i_lf; }
inline const ThreePhase<double>& bus_voltages(const PlantState& s) { return s.v_cf; }

} // namespace svocsim
