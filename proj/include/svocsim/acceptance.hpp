#pragma once

#include <map>
#include <string>
#include <vector>

#include "svocsim/runner.hpp"

namespace svocsim {

struct CriterionResult {
    int number = 0;
    std::string title;
    bool pass = false;
    std::string detail; // measured values backing the verdict
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;

    bool all_pass() const;
    std::string text() const; // one PASS/FAIL line per criterion
};

// Evaluate the full criteria set against completed canonical runs (keyed by
// scenario name).  Criteria that need no scenario run (oscillator limit
// cycle, sequence-math properties, plant-versus-phasor agreement) are
// computed in-process; the determinism criterion re-executes one scenario
// and compares output bytes.  Throws MissingScenario if a required run is
// absent from the map.
AcceptanceReport check_acceptance(const std::map<std::string, RunResult>& results);

// Run the canonical suite, write each run's outputs under out_dir, and
// evaluate.  The report text is also written to out_dir/acceptance.txt.
AcceptanceReport run_acceptance_suite(const std::string& out_dir);

} // namespace svocsim
