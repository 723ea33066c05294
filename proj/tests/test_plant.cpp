#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "svocsim/errors.hpp"
#include "svocsim/plant.hpp"

using namespace svocsim;

namespace {
constexpr double kDt = 1.0e-5;
const double kPeak = std::sqrt(2.0) * 50.0;
} // namespace

TEST_CASE("grid emf worked examples") {
    PlantParams p;
    SUBCASE("phase positions at t = 0") {
        const ThreePhase<double> e = grid_emf(p, {}, 0.0);
        CHECK(e.a == doctest::Approx(70.710678).epsilon(1e-8));
        CHECK(e.b == doctest::Approx(-35.355339).epsilon(1e-8));
        CHECK(e.c == doctest::Approx(-35.355339).epsilon(1e-8));
    }
    SUBCASE("phase b leads a by a third of a period") {
        const double third = 2.0 * oracle::kPi / (3.0 * p.omega_g);
        const ThreePhase<double> now = grid_emf(p, {}, 0.040);
        const ThreePhase<double> later = grid_emf(p, {}, 0.040 + third);
        CHECK(later.a == doctest::Approx(now.b).epsilon(1e-9));
    }
    SUBCASE("events scale only inside their half-open window") {
        const std::vector<GridEvent> ev{{0.1, 0.2, ThreePhase<double>{0.1, 1.0, 1.0}}};
        const ThreePhase<double> before = grid_emf(p, ev, 0.1 - kDt);
        const ThreePhase<double> at = grid_emf(p, ev, 0.1);
        const ThreePhase<double> after = grid_emf(p, ev, 0.2);
        CHECK(std::abs(before.a) > 7.0); // unscaled
        CHECK(at.a == doctest::Approx(0.1 * kPeak * std::cos(p.omega_g * 0.1)).epsilon(1e-12));
        CHECK(at.b == doctest::Approx(kPeak * std::cos(p.omega_g * 0.1 + 2.0 * oracle::kPi / 3.0))
                          .epsilon(1e-12));
        CHECK(after.a ==
              doctest::Approx(kPeak * std::cos(p.omega_g * 0.2)).epsilon(1e-12)); // restored
    }
    SUBCASE("three-wire sources carry no common mode") {
        p.three_wire = true;
        const std::vector<GridEvent> ev{{0.0, 1.0, ThreePhase<double>{0.2, 1.0, 0.7}}};
        for (int k = 0; k < 50; ++k) {
            const ThreePhase<double> e = grid_emf(p, ev, 0.013 * k);
            CHECK(std::abs(e.a + e.b + e.c) <= 1e-12 * kPeak);
        }
    }
}

TEST_CASE("event validation enforces windows, range, and phase exclusivity") {
    SUBCASE("well-formed events pass") {
        CHECK_NOTHROW(validate_events({{0.0, 1.0, {0.5, 1.0, 1.0}},
                                       {0.5, 2.0, {1.0, 0.2, 1.0}}})); // disjoint phases overlap ok
        CHECK_NOTHROW(validate_events({{0.0, 1.0, {0.5, 1.0, 1.0}},
                                       {1.0, 2.0, {0.9, 1.0, 1.0}}})); // touching windows ok
    }
    SUBCASE("same phase in overlapping windows is rejected") {
        CHECK_THROWS_AS(validate_events({{0.0, 1.0, {0.5, 1.0, 1.0}},
                                         {0.9, 2.0, {0.8, 1.0, 1.0}}}),
                        OverlappingEvents);
    }
    SUBCASE("scales outside [0, 1.2] are rejected") {
        CHECK_THROWS_AS(validate_events({{0.0, 1.0, {1.3, 1.0, 1.0}}}), ConfigError);
        CHECK_THROWS_AS(validate_events({{0.0, 1.0, {-0.1, 1.0, 1.0}}}), ConfigError);
    }
    SUBCASE("empty windows are rejected") {
        CHECK_THROWS_AS(validate_events({{1.0, 1.0, {0.5, 1.0, 1.0}}}), ConfigError);
    }
}

TEST_CASE("initial state sits on the grid waveform when connected") {
    PlantParams p;
    const PlantState s = PlantState::at_grid(p);
    CHECK(s.v_cf.a == doctest::Approx(kPeak).epsilon(1e-12));
    CHECK(s.i_lf.a == 0.0);
    p.grid_connected = false;
    const PlantState isl = PlantState::at_grid(p);
    CHECK(isl.v_cf.a == 0.0);
}

TEST_CASE("islanded free response matches the closed-form rlc solution to 1e-10") {
    // 50 Hz-resonant filter: l = 2 mH with c = 5.066e-3 F
    PlantParams p;
    p.grid_connected = false;
    p.c_f = 5.066e-3;
    p.r_f = 0.05;
    PlantState s;
    s.i_lf.a = 2.0;
    s.v_cf.a = 10.0;

    const ThreePhase<double> v_zero{};
    const long n = 2000; // 20 ms, one fundamental cycle
    for (long k = 0; k < n; ++k) plant_step_rk4(s, p, {}, v_zero, kDt);

    const oracle::RlcState want =
        oracle::rlc_free_response(p.r_f, p.l_f, p.c_f, 2.0, 10.0, n * kDt);
    const double scale = std::hypot(want.i * std::sqrt(p.l_f), want.v * std::sqrt(p.c_f));
    CHECK(std::abs(s.i_lf.a - want.i) * std::sqrt(p.l_f) <= 1e-10 * scale);
    CHECK(std::abs(s.v_cf.a - want.v) * std::sqrt(p.c_f) <= 1e-10 * scale);
}

TEST_CASE("lossless oscillation conserves energy to 1e-6 over one second") {
    PlantParams p;
    p.grid_connected = false;
    p.c_f = 5.066e-3;
    p.r_f = 0.0;
    PlantState s;
    s.v_cf.a = 10.0;
    const auto energy = [&]() {
        return 0.5 * p.l_f * s.i_lf.a * s.i_lf.a + 0.5 * p.c_f * s.v_cf.a * s.v_cf.a;
    };
    const double e0 = energy();
    const ThreePhase<double> v_zero{};
    for (long k = 0; k < 100000; ++k) plant_step_rk4(s, p, {}, v_zero, kDt);
    CHECK(std::abs(energy() - e0) <= 1e-6 * e0);
}

TEST_CASE("plant integration converges at fourth order") {
    const auto integrate = [](double dt) {
        PlantParams p;
        PlantState s = PlantState::at_grid(p);
        const ThreePhase<double> v_inv{70.0, 0.0, -70.0};
        const long n = std::lround(0.01 / dt);
        for (long k = 0; k < n; ++k) plant_step_rk4(s, p, {}, v_inv, dt);
        return s;
    };
    const PlantState ref = integrate(kDt / 16.0);
    const auto err = [&](const PlantState& s) {
        double acc = 0.0;
        for (int ph = 0; ph < 3; ++ph) {
            acc += std::abs(s.i_lf[ph] - ref.i_lf[ph]);
            acc += std::abs(s.v_cf[ph] - ref.v_cf[ph]) * 0.1;
            acc += std::abs(s.i_lg[ph] - ref.i_lg[ph]);
        }
        return acc;
    };
    const double e1 = err(integrate(2.0 * kDt));
    const double e2 = err(integrate(kDt));
    const double ratio = e1 / e2;
    CHECK(ratio > 11.0);
    CHECK(ratio < 23.0);
}

TEST_CASE("steady state agrees with the phasor mesh solution") {
    PlantParams p;
    p.load_r = 30.0;
    p.load_l = 0.01;
    const double w = p.omega_g;
    const double amp[3] = {75.0, 68.0, 72.0};
    const double phs[3] = {0.1, 2.0 * oracle::kPi / 3.0 - 0.05, -2.0 * oracle::kPi / 3.0 + 0.2};

    PlantState s = PlantState::at_grid(p);
    const auto v_cmd = [&](double t) {
        ThreePhase<double> v;
        for (int ph = 0; ph < 3; ++ph) v[ph] = amp[ph] * std::cos(w * t + phs[ph]);
        return v;
    };
    for (long k = 0; k < 90000; ++k) plant_step_rk4(s, p, {}, v_cmd(s.t + 0.5 * kDt), kDt);

    // project the last five cycles onto the fundamental
    std::vector<double> t_hist;
    std::vector<double> vb[3], il[3], ig[3];
    for (long k = 0; k < 10000; ++k) {
        t_hist.push_back(s.t);
        for (int ph = 0; ph < 3; ++ph) {
            vb[ph].push_back(s.v_cf[ph]);
            il[ph].push_back(s.i_lf[ph]);
            ig[ph].push_back(s.i_lg[ph]);
        }
        plant_step_rk4(s, p, {}, v_cmd(s.t + 0.5 * kDt), kDt);
    }

    oracle::MeshParams m{p.r_f, p.l_f, p.c_f + p.c_g, p.r_g, p.l_g, p.load_r, p.load_l,
                         true, true};
    const double nominal[3] = {0.0, 2.0 * oracle::kPi / 3.0, -2.0 * oracle::kPi / 3.0};
    for (int ph = 0; ph < 3; ++ph) {
        const auto want = oracle::mesh_solve(m, w, std::polar(amp[ph], phs[ph]),
                                             std::polar(kPeak, nominal[ph]));
        const std::complex<double> got_v =
            oracle::dft_fundamental(vb[ph], t_hist, w, 0, t_hist.size());
        const std::complex<double> got_if =
            oracle::dft_fundamental(il[ph], t_hist, w, 0, t_hist.size());
        const std::complex<double> got_ig =
            oracle::dft_fundamental(ig[ph], t_hist, w, 0, t_hist.size());

        const std::complex<double> got[3] = {got_v, got_if, got_ig};
        const std::complex<double> ora[3] = {want.v_bus, want.i_f, want.i_g};
        for (int q = 0; q < 3; ++q) {
            CHECK(std::abs(got[q]) == doctest::Approx(std::abs(ora[q])).epsilon(0.005));
            CHECK(std::abs(std::arg(got[q] / ora[q])) <= 0.5 * oracle::kPi / 180.0);
        }
    }
}

TEST_CASE("average power balances across a steady cycle") {
    PlantParams p;
    p.load_r = 40.0;
    p.load_l = 0.015;
    const double w = p.omega_g;
    PlantState s = PlantState::at_grid(p);
    const auto v_cmd = [&](double t) {
        ThreePhase<double> v;
        v.a = 74.0 * std::cos(w * t + 0.08);
        v.b = 74.0 * std::cos(w * t + 2.0 * oracle::kPi / 3.0 + 0.08);
        v.c = 74.0 * std::cos(w * t - 2.0 * oracle::kPi / 3.0 + 0.08);
        return v;
    };
    for (long k = 0; k < 80000; ++k) plant_step_rk4(s, p, {}, v_cmd(s.t + 0.5 * kDt), kDt);

    // accumulate the power flows over exactly one fundamental cycle
    double p_in = 0.0, p_grid = 0.0, p_loss = 0.0;
    const long n = 2000;
    for (long k = 0; k < n; ++k) {
        const ThreePhase<double> v_inv = v_cmd(s.t + 0.5 * kDt);
        const ThreePhase<double> e = grid_emf(p, {}, s.t + 0.5 * kDt);
        for (int ph = 0; ph < 3; ++ph) {
            p_in += v_inv[ph] * s.i_lf[ph];
            p_grid += e[ph] * s.i_lg[ph];
            p_loss += p.r_f * s.i_lf[ph] * s.i_lf[ph] + p.r_g * s.i_lg[ph] * s.i_lg[ph] +
                      p.load_r * s.i_load[ph] * s.i_load[ph];
        }
        plant_step_rk4(s, p, {}, v_inv, kDt);
    }
    p_in /= n;
    p_grid /= n;
    p_loss /= n;
    CHECK(p_in == doctest::Approx(p_grid + p_loss).epsilon(0.002));
}

TEST_CASE("three-wire currents sum to zero even under unbalanced drive") {
    PlantParams p;
    p.three_wire = true;
    const std::vector<GridEvent> ev{{0.0, 1.0, ThreePhase<double>{0.3, 1.0, 1.0}}};
    PlantState s = PlantState::at_grid(p);
    const double w = p.omega_g;
    for (long k = 0; k < 20000; ++k) { // 0.2 s
        // command with a deliberate common-mode offset the plant must strip
        const double t = s.t + 0.5 * kDt;
        const ThreePhase<double> v{
            70.0 * std::cos(w * t) + 5.0,
            62.0 * std::cos(w * t + 2.0 * oracle::kPi / 3.0) + 5.0,
            70.0 * std::cos(w * t - 2.0 * oracle::kPi / 3.0) + 5.0,
        };
        plant_step_rk4(s, p, ev, v, kDt);
        CHECK(std::abs(s.i_lf.a + s.i_lf.b + s.i_lf.c) <= 1e-9);
        CHECK(std::abs(s.i_lg.a + s.i_lg.b + s.i_lg.c) <= 1e-9);
    }
}

TEST_CASE("non-finite commands surface as simulation errors") {
    PlantParams p;
    PlantState s = PlantState::at_grid(p);
    CHECK_THROWS_AS(plant_step_rk4(s, p, {}, ThreePhase<double>{std::nan(""), 0.0, 0.0}, kDt),
                    NonFiniteSample);
}

TEST_CASE("parameter validation rejects inconsistent loads") {
    PlantParams p;
    p.load_r = 10.0; // resistive load without inductance has no state to carry it
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.load_l = 0.01;
    CHECK_NOTHROW(p.validate());
}
