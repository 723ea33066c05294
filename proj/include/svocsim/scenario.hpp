#pragma once

#include <string>
#include <vector>

#include "svocsim/controller.hpp"
#include "svocsim/plant.hpp"

namespace svocsim {

// A scheduled change of the power setpoints (active from t onward).
struct SetpointStep {
    double t = 0.0;
    ThreePhase<PowerSetpoints> per_phase{};
};

struct OutputConfig {
    int decimation = 20;      // ticks between CSV rows (20 ticks = 1 ms)
    std::string dir = "runs"; // output directory
};

// A complete declarative experiment: plant, controller, setpoint schedule,
// grid events, and output options.  Defaults reproduce the desk-scale test
// system (50 V rms phase, 2 mH / 20 uF filter, 10 A rms limit).
struct Scenario {
    std::string name;
    double duration = 1.0;             // simulated seconds
    std::string controller = "svoc";   // "svoc" | "dvoc_baseline"
    ControllerConfig control;
    PlantParams plant;
    double dt_plant = 1.0e-5;          // plant integrator step
    double i_max_rms = 10.0;           // per-phase current limit (A rms)
    double s_rated_va = 1000.0;        // three-phase rated apparent power
    std::vector<SetpointStep> setpoints{SetpointStep{}};
    std::vector<GridEvent> events;
    OutputConfig output;

    int plant_substeps() const;        // ticks-to-plant-steps ratio
    void validate() const;             // throws ConfigError / OverlappingEvents
};

// Parse / serialize the documented JSON schema.  Unknown keys are rejected.
Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string scenario_to_json_text(const Scenario& s);

// The built-in experiment suite driven by the acceptance harness.
std::vector<std::string> canonical_scenario_names();
Scenario canonical_scenario(const std::string& name); // throws MissingScenario

} // namespace svocsim
