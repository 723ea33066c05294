#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "svocsim/baseline_dvoc.hpp"
#include "svocsim/errors.hpp"
#include "svocsim/runner.hpp"
#include "svocsim/scenario.hpp"

using namespace svocsim;

TEST_CASE("two-axis projection worked examples") {
    const AlphaBeta x = clarke(ThreePhase<double>{1.0, -0.5, -0.5});
    CHECK(x.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x.beta == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    const double s3 = 0.8660254037844386;
    const AlphaBeta y = clarke(ThreePhase<double>{0.0, s3, -s3});
    CHECK(y.alpha == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(y.beta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projection round trip recovers zero-sum triples and strips common mode") {
    const ThreePhase<double> zero_sum{4.0, -1.5, -2.5};
    const ThreePhase<double> back = inverse_clarke(clarke(zero_sum));
    CHECK(back.a == doctest::Approx(zero_sum.a).epsilon(1e-12));
    CHECK(back.b == doctest::Approx(zero_sum.b).epsilon(1e-12));
    CHECK(back.c == doctest::Approx(zero_sum.c).epsilon(1e-12));

    const ThreePhase<double> offset{4.0 + 2.0, -1.5 + 2.0, -2.5 + 2.0};
    const ThreePhase<double> stripped = inverse_clarke(clarke(offset));
    CHECK(stripped.a == doctest::Approx(zero_sum.a).epsilon(1e-12));
}

TEST_CASE("aggregate current reference worked example") {
    const AlphaBeta v{70.710678118654755, 0.0};
    const AlphaBeta i = dvoc_current_reference(v, PowerSetpoints{200.0, 100.0});
    CHECK(i.alpha == doctest::Approx(2.0 * 200.0 / 70.710678118654755).epsilon(1e-12));
    CHECK(i.beta == doctest::Approx(2.0 * 100.0 / 70.710678118654755).epsilon(1e-12));
    CHECK_THROWS_AS(dvoc_current_reference(AlphaBeta{1e-7, 0.0}, PowerSetpoints{10.0, 0.0}),
                    DegenerateReference);
}

namespace {

// Mean of a trace column over [t0, t1).
double mean_between(const TickTrace& tr, const std::vector<ThreePhase<double>>& col,
                    double t0, double t1, int ph) {
    double acc = 0.0;
    long n = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        if (tr.t[k] >= t0 && tr.t[k] < t1) {
            acc += col[k][ph];
            ++n;
        }
    }
    return n ? acc / n : 0.0;
}

Scenario balanced_scenario(double p_total, double duration) {
    Scenario s;
    s.name = "balanced_case";
    s.duration = duration;
    const PowerSetpoints each{p_total / 3.0, 0.0};
    s.setpoints = {SetpointStep{0.0, ThreePhase<PowerSetpoints>{each, each, each}}};
    return s;
}

} // namespace

TEST_CASE("baseline matches the sequence controller on balanced operation within 3 percent") {
    const Scenario s = balanced_scenario(600.0, 1.5);
    RunOptions svoc_opt, dvoc_opt;
    dvoc_opt.controller_override = "dvoc_baseline";
    const RunResult a = run_scenario(s, svoc_opt);
    const RunResult b = run_scenario(s, dvoc_opt);
    REQUIRE_FALSE(a.error.has_value());
    REQUIRE_FALSE(b.error.has_value());
    for (int ph = 0; ph < 3; ++ph) {
        const double pa = mean_between(a.trace, a.trace.p, 1.0, 1.5, ph);
        const double pb = mean_between(b.trace, b.trace.p, 1.0, 1.5, ph);
        CHECK(pa == doctest::Approx(200.0).epsilon(0.03));
        CHECK(pb == doctest::Approx(pa).epsilon(0.03));
    }
}

TEST_CASE("zero setpoints leave only residual current") {
    const Scenario s = balanced_scenario(0.0, 1.0);
    for (const char* ctrl : {"svoc", "dvoc_baseline"}) {
        RunOptions opt;
        opt.controller_override = ctrl;
        const RunResult r = run_scenario(s, opt);
        REQUIRE_FALSE(r.error.has_value());
        for (int ph = 0; ph < 3; ++ph) {
            const double rms = mean_between(r.trace, r.trace.irms, 0.8, 1.0, ph);
            CHECK(rms <= 0.02 * r.scenario.i_max_rms);
        }
    }
}

TEST_CASE("filtered power agrees with the raw volt-ampere average") {
    const Scenario s = balanced_scenario(600.0, 1.5);
    const RunResult r = run_scenario(s);
    REQUIRE_FALSE(r.error.has_value());
    // average v*i over the last exactly two fundamental cycles (ticks)
    const std::size_t n = r.trace.size();
    const std::size_t win = 800; // 2 * (0.02 s / 50 us)
    for (int ph = 0; ph < 3; ++ph) {
        double acc = 0.0;
        for (std::size_t k = n - win; k < n; ++k) acc += r.trace.v[k][ph] * r.trace.i[k][ph];
        acc /= win;
        const double filtered = mean_between(r.trace, r.trace.p, 1.46, 1.5, ph);
        CHECK(acc == doctest::Approx(filtered).epsilon(0.01));
    }
}

TEST_CASE("repeated runs produce identical csv bytes") {
    const Scenario s = balanced_scenario(300.0, 0.3);
    const RunResult r1 = run_scenario(s);
    const RunResult r2 = run_scenario(s);
    CHECK(csv_text(r1) == csv_text(r2));
}

TEST_CASE("csv layout: header, initial row, decimation, error marker") {
    const Scenario s = balanced_scenario(300.0, 0.1);
    RunResult r = run_scenario(s);
    REQUIRE_FALSE(r.error.has_value());
    const std::string text = csv_text(r);

    std::istringstream is(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);

    CHECK(lines.front() ==
          "t,va,vb,vc,ia,ib,ic,Pa,Pb,Pc,Qa,Qb,Qc,irms_a,irms_b,irms_c,"
          "fault_a,fault_b,fault_c,amp_pos,amp_neg,amp_zero");
    CHECK(lines[1].substr(0, 9) == "0.000000,");
    // 2000 ticks decimated by 20, plus header and initial row
    CHECK(lines.size() == 2 + 2000 / 20);
    // every row carries 22 comma-separated fields
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const long commas = std::count(lines[k].begin(), lines[k].end(), ',');
        CHECK(commas == 21);
    }

    r.error = "t=0.123456 simulation error: synthetic";
    const std::string with_err = csv_text(r);
    CHECK(with_err.find("# t=0.123456 simulation error: synthetic\n") != std::string::npos);
}

TEST_CASE("metrics json reports completion and final readings") {
    const Scenario s = balanced_scenario(300.0, 0.2);
    const RunResult r = run_scenario(s);
    const std::string m = metrics_text(r);
    CHECK(m.find("\"completed\": true") != std::string::npos);
    CHECK(m.find("\"max_irms\"") != std::string::npos);
    CHECK(m.find("\"fault_flag_seconds\"") != std::string::npos);
}

TEST_CASE("scenario json accepts totals, per-phase arrays, and rejects junk") {
    SUBCASE("minimal scenario uses the catalog defaults") {
        const Scenario s = scenario_from_json_text(R"({"name":"tiny"})");
        CHECK(s.duration == 1.0);
        CHECK(s.controller == "svoc");
        CHECK(s.plant_substeps() == 5);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(scenario_from_json_text(R"({"name":"x","durration":2.0})"),
                        ConfigError);
        CHECK_THROWS_AS(scenario_from_json_text(R"({"name":"x","control":{"bogus":1}})"),
                        ConfigError);
    }
    SUBCASE("per-phase arrays land on the right phases") {
        const Scenario s = scenario_from_json_text(
            R"({"name":"x","setpoints":[{"t":0,"p_w":[100,120,90],"q_var":[0,10,-10]}]})");
        CHECK(s.setpoints[0].per_phase.b.p_w == 120.0);
        CHECK(s.setpoints[0].per_phase.c.q_var == -10.0);
    }
    SUBCASE("totals split equally") {
        const Scenario s = scenario_from_json_text(
            R"({"name":"x","setpoints":[{"t":0,"p_total_w":600,"q_total_var":30}]})");
        CHECK(s.setpoints[0].per_phase.a.p_w == doctest::Approx(200.0));
        CHECK(s.setpoints[0].per_phase.c.q_var == doctest::Approx(10.0));
    }
    SUBCASE("per-phase setpoints beyond the rated fraction are rejected") {
        CHECK_THROWS_AS(scenario_from_json_text(
                            R"({"name":"x","setpoints":[{"t":0,"p_total_w":2000}]})"),
                        ConfigError);
    }
    SUBCASE("setpoints must start at zero and increase") {
        CHECK_THROWS_AS(scenario_from_json_text(
                            R"({"name":"x","setpoints":[{"t":0.5,"p_total_w":300}]})"),
                        ConfigError);
        CHECK_THROWS_AS(
            scenario_from_json_text(
                R"({"name":"x","setpoints":[{"t":0,"p_total_w":300},{"t":0,"p_total_w":400}]})"),
            ConfigError);
    }
    SUBCASE("control period must be a multiple of the plant step") {
        CHECK_THROWS_AS(scenario_from_json_text(
                            R"({"name":"x","plant":{"dt":3.0e-5}})"),
                        ConfigError);
    }
    SUBCASE("overlapping events on one phase are rejected") {
        CHECK_THROWS_AS(scenario_from_json_text(
                            R"({"name":"x","duration":2.0,"events":[)"
                            R"({"t_start":0.1,"t_end":1.0,"scale":{"a":0.5}},)"
                            R"({"t_start":0.5,"t_end":1.5,"scale":{"a":0.7}}]})"),
                        OverlappingEvents);
    }
    SUBCASE("invalid json surfaces as a config error") {
        CHECK_THROWS_AS(scenario_from_json_text("{not json"), ConfigError);
    }
}

TEST_CASE("scenario serialization round-trips the physics") {
    const Scenario s0 = canonical_scenario("fault_a_010");
    const Scenario s1 = scenario_from_json_text(scenario_to_json_text(s0));
    CHECK(s1.duration == s0.duration);
    CHECK(s1.controller == s0.controller);
    CHECK(s1.events.size() == s0.events.size());
    CHECK(s1.events[0].scale.a == s0.events[0].scale.a);
    CHECK(s1.setpoints[0].per_phase.a.p_w == s0.setpoints[0].per_phase.a.p_w);
    CHECK(s1.i_max_rms == s0.i_max_rms);
}

TEST_CASE("catalog lists five scenarios and rejects unknown names") {
    const std::vector<std::string> names = canonical_scenario_names();
    CHECK(names.size() == 5);
    for (const std::string& n : names) CHECK_NOTHROW(canonical_scenario(n));
    CHECK_THROWS_AS(canonical_scenario("no_such_case"), MissingScenario);
}

TEST_CASE("power measurement convention worked examples") {
    // aligned voltage and current: pure active power
    const PqSample p1 = measure_pq(SyncFrameSample{70.710678, 0.0},
                                   SyncFrameSample{8.485281, 0.0});
    CHECK(p1.p == doctest::Approx(300.0).epsilon(1e-6));
    CHECK(p1.q == doctest::Approx(0.0).scale(300.0).epsilon(1e-12));
    // current lagging by a quarter period: positive reactive power
    const PqSample p2 = measure_pq(SyncFrameSample{70.710678, 0.0},
                                   SyncFrameSample{0.0, -8.485281});
    CHECK(p2.q == doctest::Approx(300.0).epsilon(1e-6));
    // current leading: negative reactive power
    const PqSample p3 = measure_pq(SyncFrameSample{70.710678, 0.0},
                                   SyncFrameSample{0.0, 8.485281});
    CHECK(p3.q == doctest::Approx(-300.0).epsilon(1e-6));
}
