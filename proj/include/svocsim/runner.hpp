#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svocsim/controller.hpp"
#include "svocsim/scenario.hpp"

namespace svocsim {

struct PqSample {
    double p = 0.0; // watts
    double q = 0.0; // vars
};

// Single-phase power from peak-valued synchronous-frame phasors:
//   P = (V_d*I_d + V_q*I_q)/2,  Q = (V_q*I_d - V_d*I_q)/2.
// Positive Q means the current lags the voltage (inductive support).
PqSample measure_pq(const SyncFrameSample& v, const SyncFrameSample& i);

// Full-resolution per-tick records (one entry per controller tick, timed at
// the tick's end boundary).
struct TickTrace {
    std::vector<double> t;
    std::vector<ThreePhase<double>> v;     // bus voltages (V)
    std::vector<ThreePhase<double>> i;     // inverter currents (A)
    std::vector<ThreePhase<double>> p;     // filtered active power (W)
    std::vector<ThreePhase<double>> q;     // filtered reactive power (var)
    std::vector<ThreePhase<double>> irms;  // one-cycle sliding rms (A)
    std::vector<ThreePhase<bool>> fault;   // reported fault flags
    std::vector<SequenceAmplitudes> amps;  // sequence amplitudes (V)

    std::size_t size() const { return t.size(); }
};

struct RunOptions {
    std::optional<std::string> controller_override;
    std::optional<double> dt_plant_override;
    bool seed_free = false; // start the oscillator from a 0.1 V perturbation
};

struct RunResult {
    Scenario scenario; // effective configuration after overrides
    TickTrace trace;
    std::vector<std::string> events;  // timestamped log lines
    std::optional<std::string> error; // set if the simulation aborted
};

// Execute a scenario tick by tick.  Deterministic: identical inputs produce
// identical results.  A SimulationError mid-run stops stepping and is
// recorded in `error` with its timestamp; the partial trace is kept.
RunResult run_scenario(const Scenario& s, const RunOptions& opt = {});

// The CSV time series (decimated per the scenario's output config).
std::string csv_text(const RunResult& r);

// Deterministic summary of the run for the metrics file.
std::string metrics_text(const RunResult& r);

// Write <dir>/<name>.csv, <name>.metrics.json, and <name>.events.log.
// Returns the CSV path.  Creates the directory if needed.
std::string write_outputs(const RunResult& r, const std::string& dir);

} // namespace svocsim
