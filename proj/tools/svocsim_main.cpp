// Command-line front end: run declarative scenarios, execute the acceptance
// suite, or list the built-in scenarios.
//
// Exit codes: 0 success, 1 simulation error, 2 acceptance failure,
// 3 configuration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "svocsim/acceptance.hpp"
#include "svocsim/errors.hpp"
#include "svocsim/runner.hpp"
#include "svocsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSimulation = 1;
constexpr int kExitAcceptance = 2;
constexpr int kExitConfig = 3;

svocsim::Scenario resolve_scenario(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::exists(arg, ec)) {
        return svocsim::load_scenario_file(arg);
    }
    // fall back to the built-in catalog so `run track_900` works too
    return svocsim::canonical_scenario(arg);
}

int do_run(const std::string& scenario_arg, const std::string& out_dir,
           const std::string& controller, double dt_plant, bool seed_free) {
    svocsim::Scenario sc = resolve_scenario(scenario_arg);
    if (!out_dir.empty()) sc.output.dir = out_dir;

    svocsim::RunOptions opt;
    if (!controller.empty()) opt.controller_override = controller;
    if (dt_plant > 0.0) opt.dt_plant_override = dt_plant;
    opt.seed_free = seed_free;

    svocsim::RunResult res = svocsim::run_scenario(sc, opt);
    const std::string csv_path = svocsim::write_outputs(res, res.scenario.output.dir);

    std::printf("scenario %s (%s): %.6f s simulated, %zu trace rows\n",
                res.scenario.name.c_str(), res.scenario.controller.c_str(),
                res.scenario.duration, res.trace.size());
    std::printf("outputs: %s\n", csv_path.c_str());
    for (const std::string& line : res.events) std::printf("event: %s\n", line.c_str());

    if (res.error) {
        std::fprintf(stderr, "simulation aborted: %s\n", res.error->c_str());
        return kExitSimulation;
    }
    return kExitOk;
}

int do_check(const std::string& suite, const std::string& out_dir) {
    if (suite != "canonical") {
        throw svocsim::ConfigError("unknown suite '" + suite + "' (expected 'canonical')");
    }
    svocsim::AcceptanceReport rep = svocsim::run_acceptance_suite(out_dir);
    std::fputs(rep.text().c_str(), stdout);
    return rep.all_pass() ? kExitOk : kExitAcceptance;
}

int do_list() {
    for (const std::string& name : svocsim::canonical_scenario_names()) {
        const svocsim::Scenario sc = svocsim::canonical_scenario(name);
        std::printf("%-20s %-14s %6.2f s\n", sc.name.c_str(), sc.controller.c_str(),
                    sc.duration);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-phase grid-forming inverter simulator"};
    app.require_subcommand(1);

    std::string scenario_arg, run_out, controller, check_out = "runs/acceptance";
    std::string suite = "canonical";
    double dt_plant = 0.0;
    bool seed_free = false;

    CLI::App* run = app.add_subcommand("run", "simulate one scenario and write csv/metrics/event outputs");
    run->add_option("scenario", scenario_arg, "scenario json file (or a built-in scenario name)")->required();
    run->add_option("--out", run_out, "output directory (default: the scenario's own setting)");
    run->add_option("--controller", controller, "override the controller: svoc or dvoc_baseline")
        ->check(CLI::IsMember({"svoc", "dvoc_baseline"}));
    run->add_option("--dt-plant", dt_plant, "override the plant integrator step in seconds")
        ->check(CLI::PositiveNumber);
    run->add_flag("--seed-free", seed_free, "start the oscillator from a small deterministic perturbation instead of nominal");

    CLI::App* check = app.add_subcommand("check", "run the acceptance suite and report pass/fail per criterion");
    check->add_option("--suite", suite, "suite to run (canonical)");
    check->add_option("--out", check_out, "output directory for the suite runs");

    CLI::App* list = app.add_subcommand("list-scenarios", "list built-in scenarios");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return do_run(scenario_arg, run_out, controller, dt_plant, seed_free);
        if (check->parsed()) return do_check(suite, check_out);
        if (list->parsed()) return do_list();
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const svocsim::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const svocsim::MissingScenario& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const svocsim::SimulationError& e) {
        std::fprintf(stderr, "simulation error: %s\n", e.what());
        return kExitSimulation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSimulation;
    }
}
