#include "svocsim/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "svocsim/errors.hpp"
#include "svocsim/plant.hpp"
#include "svocsim/scenario.hpp"
#include "svocsim/svoc.hpp"

namespace svocsim {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Trace windowing helpers.  Windows are [t0, t1) on the tick timeline.
// ---------------------------------------------------------------------------

struct Window {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

Window window_of(const TickTrace& tr, double t0, double t1) {
    Window w;
    w.lo = static_cast<std::size_t>(std::lower_bound(tr.t.begin(), tr.t.end(), t0) - tr.t.begin());
    w.hi = static_cast<std::size_t>(std::lower_bound(tr.t.begin(), tr.t.end(), t1) - tr.t.begin());
    if (w.hi < w.lo) w.hi = w.lo;
    return w;
}

double mean_of(const std::vector<ThreePhase<double>>& v, Window w, int ph) {
    if (w.hi <= w.lo) return 0.0;
    double acc = 0.0;
    for (std::size_t k = w.lo; k < w.hi; ++k) acc += v[k][ph];
    return acc / static_cast<double>(w.hi - w.lo);
}

double max_of(const std::vector<ThreePhase<double>>& v, Window w, int ph) {
    double m = -1e300;
    for (std::size_t k = w.lo; k < w.hi; ++k) m = std::max(m, v[k][ph]);
    return m;
}

const RunResult& need(const std::map<std::string, RunResult>& results, const std::string& name) {
    auto it = results.find(name);
    if (it == results.end()) throw MissingScenario(name);
    return it->second;
}

// A run that aborted cannot satisfy any criterion that depends on it.
bool aborted(const RunResult& r, CriterionResult& c) {
    if (!r.error) return false;
    c.pass = false;
    c.detail = r.scenario.name + " aborted: " + *r.error;
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 1: balanced power-step tracking.
// ---------------------------------------------------------------------------

CriterionResult criterion_tracking(const std::map<std::string, RunResult>& results) {
    CriterionResult c{1, "balanced power-step tracking", false, ""};
    const RunResult& r = need(results, "track_900");
    if (aborted(r, c)) return c;
    if (r.scenario.setpoints.size() < 2) {
        c.detail = "scenario has no setpoint step";
        return c;
    }
    const double t_step = r.scenario.setpoints[1].t;
    const double dur = r.scenario.duration;
    const TickTrace& tr = r.trace;

    bool ok = true;
    double settle_ms[3], steady_w[3], peak_w[3], before_w[3];
    for (int ph = 0; ph < 3; ++ph) {
        const double p0 = r.scenario.setpoints[0].per_phase[ph].p_w;
        const double p1 = r.scenario.setpoints[1].per_phase[ph].p_w;
        const double band = 0.05 * p1;

        Window pre = window_of(tr, t_step - 0.25, t_step);
        Window tail = window_of(tr, dur - 0.25, dur);
        Window post = window_of(tr, t_step, dur);

        before_w[ph] = mean_of(tr.p, pre, ph);
        steady_w[ph] = mean_of(tr.p, tail, ph);
        peak_w[ph] = max_of(tr.p, post, ph);

        // settling time: instant after which P stays inside the +/-5 % band
        double settle = std::numeric_limits<double>::infinity();
        std::size_t last_out = post.lo;
        bool ever_out = false;
        for (std::size_t k = post.lo; k < post.hi; ++k) {
            if (std::abs(tr.p[k][ph] - p1) > band) {
                last_out = k;
                ever_out = true;
            }
        }
        if (!ever_out) {
            settle = 0.0;
        } else if (last_out + 1 < post.hi) {
            settle = tr.t[last_out + 1] - t_step;
        }
        settle_ms[ph] = settle * 1e3;

        ok = ok && std::abs(before_w[ph] - p0) <= 0.02 * p0;
        ok = ok && std::abs(steady_w[ph] - p1) <= 0.02 * p1;
        ok = ok && settle <= 0.250;
        ok = ok && peak_w[ph] <= 1.05 * p1;
    }
    c.pass = ok;
    c.detail = strf("steady(W)=(%.2f,%.2f,%.2f) settle(ms)=(%.1f,%.1f,%.1f) peak(W)=(%.2f,%.2f,%.2f) pre-step(W)=(%.2f,%.2f,%.2f)",
                    steady_w[0], steady_w[1], steady_w[2],
                    settle_ms[0], settle_ms[1], settle_ms[2],
                    peak_w[0], peak_w[1], peak_w[2],
                    before_w[0], before_w[1], before_w[2]);
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 2: reactive support under a mild single-phase sag while the
// healthy phases keep their active power and stay near unity power factor.
// ---------------------------------------------------------------------------

CriterionResult criterion_sag(const std::map<std::string, RunResult>& results) {
    CriterionResult c{2, "single-phase sag reactive support", false, ""};
    const RunResult& r = need(results, "sag_a_090");
    if (aborted(r, c)) return c;
    const TickTrace& tr = r.trace;
    const double dur = r.scenario.duration;
    const double preset = r.scenario.setpoints.back().per_phase.a.p_w;
    const double q_bound = 0.10 * r.scenario.s_rated_va / 3.0;

    Window w = window_of(tr, dur - 0.5, dur);
    const double qa = mean_of(tr.q, w, 0);
    const double pb = mean_of(tr.p, w, 1);
    const double pc = mean_of(tr.p, w, 2);
    const double qb = mean_of(tr.q, w, 1);
    const double qc = mean_of(tr.q, w, 2);

    c.pass = qa > 0.0 &&
             std::abs(pb - preset) <= 0.05 * preset &&
             std::abs(pc - preset) <= 0.05 * preset &&
             std::abs(qb) <= q_bound && std::abs(qc) <= q_bound;
    c.detail = strf("Qa=%.2f var Pb=%.2f Pc=%.2f W (target %.0f +/-%.0f) Qb=%.2f Qc=%.2f var (|Q|<=%.2f)",
                    qa, pb, pc, preset, 0.05 * preset, qb, qc, q_bound);
    return c;
}

// ---------------------------------------------------------------------------
// Criteria 3/4: deep-fault current limiting plus healthy-phase power.
// The rms bound applies from one detection interval (rms window + dwell,
// i.e. two fundamental cycles) after the fault starts, through end of run.
// ---------------------------------------------------------------------------

struct FaultChecks {
    double max_rms[3];
    double q_mean[3];
    double p_mean[3];
    double bound;
    double preset;
};

FaultChecks fault_checks(const RunResult& r) {
    FaultChecks f{};
    const TickTrace& tr = r.trace;
    const GridEvent& ev = r.scenario.events.at(0);
    const double cycle = 2.0 * kPi / r.scenario.control.osc.omega_n;
    const double t_eval = ev.t_start + 2.0 * cycle;
    f.bound = 1.01 * r.scenario.i_max_rms;
    f.preset = r.scenario.setpoints.back().per_phase.a.p_w;

    Window lim = window_of(tr, t_eval, r.scenario.duration);
    Window steady = window_of(tr, ev.t_end - 0.5, ev.t_end);
    for (int ph = 0; ph < 3; ++ph) {
        f.max_rms[ph] = max_of(tr.irms, lim, ph);
        f.q_mean[ph] = mean_of(tr.q, steady, ph);
        f.p_mean[ph] = mean_of(tr.p, steady, ph);
    }
    return f;
}

CriterionResult criterion_fault_one(const std::map<std::string, RunResult>& results) {
    CriterionResult c{3, "one-phase fault: current limit and healthy power", false, ""};
    const RunResult& r = need(results, "fault_a_010");
    if (aborted(r, c)) return c;
    FaultChecks f = fault_checks(r);
    c.pass = f.max_rms[0] <= f.bound &&
             f.q_mean[0] > 0.0 &&
             std::abs(f.p_mean[1] - f.preset) <= 0.10 * f.preset &&
             std::abs(f.p_mean[2] - f.preset) <= 0.10 * f.preset;
    c.detail = strf("max rms(ia)=%.3f A (limit %.3f) Qa=%.2f var Pb=%.2f Pc=%.2f W (target %.0f +/-%.0f)",
                    f.max_rms[0], f.bound, f.q_mean[0], f.p_mean[1], f.p_mean[2],
                    f.preset, 0.10 * f.preset);
    return c;
}

CriterionResult criterion_fault_two(const std::map<std::string, RunResult>& results) {
    CriterionResult c{4, "two-phase fault: current limit and healthy power", false, ""};
    const RunResult& r = need(results, "fault_bc_005");
    if (aborted(r, c)) return c;
    FaultChecks f = fault_checks(r);
    c.pass = f.max_rms[1] <= f.bound && f.max_rms[2] <= f.bound &&
             f.q_mean[1] > 0.0 && f.q_mean[2] > 0.0 &&
             std::abs(f.p_mean[0] - f.preset) <= 0.10 * f.preset;
    c.detail = strf("max rms(ib)=%.3f rms(ic)=%.3f A (limit %.3f) Qb=%.2f Qc=%.2f var Pa=%.2f W (target %.0f +/-%.0f)",
                    f.max_rms[1], f.max_rms[2], f.bound, f.q_mean[1], f.q_mean[2],
                    f.p_mean[0], f.preset, 0.10 * f.preset);
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 5: the single-oscillator baseline rides through the same fault
// without tripping the current limit, but its healthy-phase power collapses,
// while the sequence controller holds it.
// ---------------------------------------------------------------------------

CriterionResult criterion_baseline(const std::map<std::string, RunResult>& results) {
    CriterionResult c{5, "baseline comparison under one-phase fault", false, ""};
    const RunResult& svoc = need(results, "fault_a_010");
    const RunResult& dvoc = need(results, "fault_a_010_dvoc");
    if (aborted(svoc, c) || aborted(dvoc, c)) return c;

    FaultChecks fs = fault_checks(svoc);
    FaultChecks fd = fault_checks(dvoc);

    const double hold = 0.90 * fs.preset;    // sequence controller must keep this
    const double collapse = 0.25 * fd.preset; // baseline must fall below this

    c.pass = fd.max_rms[0] <= fd.bound &&
             fd.p_mean[1] < collapse && fd.p_mean[2] < collapse &&
             fs.p_mean[1] >= hold && fs.p_mean[2] >= hold;
    c.detail = strf("baseline: max rms(ia)=%.3f A (limit %.3f) Pb=%.2f Pc=%.2f W (< %.0f) | sequence: Pb=%.2f Pc=%.2f W (>= %.0f)",
                    fd.max_rms[0], fd.bound, fd.p_mean[1], fd.p_mean[2], collapse,
                    fs.p_mean[1], fs.p_mean[2], hold);
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 6: free-running oscillator limit cycle.  From a small
// perturbation the positive-sequence oscillator must reach the nominal
// radius and frequency within one second; both are measured over the last
// ten of fifty fundamental cycles.
// ---------------------------------------------------------------------------

CriterionResult criterion_limit_cycle() {
    CriterionResult c{6, "free-running oscillator limit cycle", false, ""};
    ControllerConfig cfg;
    cfg.validate();
    const OscParams& p = cfg.osc;

    SvocState s = SvocState::nominal(p);
    s.pos = AlphaBeta{0.1, 0.0};
    const SequenceFeedback fb{}; // no current error while free-running

    const double cycle = 2.0 * kPi / p.omega_n;
    const double t_total = 50.0 * cycle;
    const double t_meas = 40.0 * cycle;
    const long n_ticks = std::lround(t_total / cfg.dt);

    double amp_acc = 0.0;
    long amp_n = 0;
    double phase_acc = 0.0;
    double prev_angle = 0.0;
    bool have_prev = false;
    double first_t = 0.0, last_t = 0.0;

    for (long k = 0; k < n_ticks; ++k) {
        (void)svoc_step(s, p, fb, cfg.dt);
        const double t = static_cast<double>(k + 1) * cfg.dt;
        if (t < t_meas) continue;
        amp_acc += std::hypot(s.pos.alpha, s.pos.beta);
        ++amp_n;
        // clockwise rotation: alpha = A cos(wt), beta = -A sin(wt)
        const double ang = std::atan2(-s.pos.beta, s.pos.alpha);
        if (have_prev) {
            double d = ang - prev_angle;
            while (d > kPi) d -= 2.0 * kPi;
            while (d < -kPi) d += 2.0 * kPi;
            phase_acc += d;
        } else {
            first_t = t;
        }
        prev_angle = ang;
        have_prev = true;
        last_t = t;
    }

    const double amp = amp_acc / static_cast<double>(amp_n);
    const double freq = phase_acc / (2.0 * kPi * (last_t - first_t));
    const double amp_ref = p.peak_v();
    const double f_ref = p.omega_n / (2.0 * kPi);

    c.pass = std::abs(amp - amp_ref) <= 1.0e-3 * amp_ref &&
             std::abs(freq - f_ref) <= 1.0e-4 * f_ref;
    c.detail = strf("amplitude=%.6f V (ref %.6f, tol 0.1%%) frequency=%.6f Hz (ref %.2f, tol 0.01%%)",
                    amp, amp_ref, freq, f_ref);
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 7: sequence-math property suite over randomized inputs with a
// fixed seed: decompose/resynthesize round trip, rejection of balanced
// sets by the negative/zero channels, and exact output nulling when the
// negative/zero oscillators sit on the nominal circle.
// ---------------------------------------------------------------------------

CriterionResult criterion_sequence_math() {
    CriterionResult c{7, "sequence-math property suite", false, ""};
    std::mt19937 rng(20260815u);
    std::uniform_real_distribution<double> comp(-10.0, 10.0);
    std::uniform_real_distribution<double> mag(1.0, 10.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);

    // (a) round trip: per-phase complex error -> sequences -> back, 1e-12 rel.
    double worst_rt_rel = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        ThreePhase<QuadPair> i_inv, i_ref;
        for (int ph = 0; ph < 3; ++ph) {
            i_inv[ph] = QuadPair{comp(rng), comp(rng)};
            i_ref[ph] = QuadPair{comp(rng), comp(rng)};
        }
        SequenceFeedback fb = feedback_decompose(i_inv, i_ref);
        ThreePhase<std::complex<double>> z = feedback_resynthesize(fb);
        double scale = 0.0, abs_err = 0.0;
        for (int ph = 0; ph < 3; ++ph) {
            const std::complex<double> want(i_inv[ph].d - i_ref[ph].d,
                                            -(i_inv[ph].q - i_ref[ph].q));
            scale = std::max(scale, std::abs(want));
            abs_err = std::max(abs_err, std::abs(z[ph] - want));
        }
        worst_rt_rel = std::max(worst_rt_rel, abs_err / std::max(scale, 1e-300));
    }

    // (b) balanced rejection: a balanced set must land in the positive
    // channel alone to 1e-6 relative.
    double worst_leak = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = mag(rng);
        const double th = ang(rng);
        ThreePhase<QuadPair> set;
        const double off[3] = {0.0, 2.0 * kPi / 3.0, -2.0 * kPi / 3.0};
        for (int ph = 0; ph < 3; ++ph) {
            set[ph] = QuadPair{a * std::cos(th + off[ph]), a * std::sin(th + off[ph])};
        }
        SequenceFeedback fb = feedback_decompose(set, ThreePhase<QuadPair>{});
        const double pos = std::hypot(fb.pos.alpha, fb.pos.beta);
        const double leak = std::max(std::hypot(fb.neg.alpha, fb.neg.beta),
                                     std::hypot(fb.zero.alpha, fb.zero.beta));
        worst_leak = std::max(worst_leak, leak / pos);
    }

    // (c) on-circle nulling of the negative/zero reference contributions.
    OscParams p;
    const double r = p.peak_v();
    double worst_null = 0.0;
    for (int k = 0; k < 12; ++k) {
        const double th = 2.0 * kPi * k / 12.0;
        const AlphaBeta v{r * std::cos(th), r * std::sin(th)};
        const AlphaBeta on = neg_osc_outputs(p, v);
        const AlphaBeta oz = zero_osc_outputs(p, v);
        worst_null = std::max({worst_null, std::hypot(on.alpha, on.beta),
                               std::hypot(oz.alpha, oz.beta)});
    }

    c.pass = worst_rt_rel <= 1.0e-12 && worst_leak <= 1.0e-6 && worst_null <= 1.0e-9;
    c.detail = strf("round-trip err=%.3e (<=1e-12 rel) balanced leak=%.3e (<=1e-6) on-circle output=%.3e V (<=1e-9)",
                    worst_rt_rel, worst_leak, worst_null);
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 8: plant steady state versus an independent per-phase
// mesh-analysis phasor solution at randomized operating points.
// ---------------------------------------------------------------------------

struct PhasorSet {
    std::complex<double> v_bus, i_f, i_g;
};

PhasorSet mesh_solution(const PlantParams& p, std::complex<double> v_inv, std::complex<double> e_g) {
    const std::complex<double> jw(0.0, p.omega_g);
    const std::complex<double> y_f = 1.0 / (p.r_f + jw * p.l_f);
    const std::complex<double> y_g = p.grid_connected ? 1.0 / (p.r_g + jw * p.l_g)
                                                      : std::complex<double>(0.0, 0.0);
    const std::complex<double> y_c = jw * (p.c_f + p.c_g);
    const std::complex<double> y_l = p.has_load() ? 1.0 / (p.load_r + jw * p.load_l)
                                                  : std::complex<double>(0.0, 0.0);
    PhasorSet out;
    out.v_bus = (v_inv * y_f + e_g * y_g) / (y_f + y_g + y_c + y_l);
    out.i_f = (v_inv - out.v_bus) * y_f;
    out.i_g = p.grid_connected ? (out.v_bus - e_g) * y_g : std::complex<double>(0.0, 0.0);
    return out;
}

CriterionResult criterion_plant_phasors() {
    CriterionResult c{8, "plant versus mesh-analysis phasors", false, ""};
    std::mt19937 rng(8020260u);
    std::uniform_real_distribution<double> u_amp(55.0, 80.0);
    std::uniform_real_distribution<double> u_ang(-0.35, 0.35);

    const double dt = 1.0e-5;
    const double warm = 0.9;
    double worst_mag = 0.0, worst_deg = 0.0;

    for (int pt = 0; pt < 5; ++pt) {
        PlantParams p;
        if (pt == 1) { p.load_r = 30.0; p.load_l = 5.0e-3; }
        if (pt == 2) { p.load_r = 50.0; p.load_l = 0.02; }
        if (pt == 3) p.c_g = 20.0e-6;
        if (pt == 4) { p.r_f = 0.1; p.r_g = 0.2; p.l_g = 3.0e-3; }
        p.validate();

        const double nominal[3] = {0.0, 2.0 * kPi / 3.0, -2.0 * kPi / 3.0};
        double amp[3], phs[3];
        for (int ph = 0; ph < 3; ++ph) {
            amp[ph] = u_amp(rng);
            phs[ph] = nominal[ph] + u_ang(rng);
        }

        const std::vector<GridEvent> no_events;
        PlantState s = PlantState::at_grid(p);
        const long n_warm = std::lround(warm / dt);
        const long n_meas = std::lround((5.0 * 2.0 * kPi / p.omega_g) / dt);

        auto v_cmd = [&](double t) {
            ThreePhase<double> v;
            for (int ph = 0; ph < 3; ++ph) v[ph] = amp[ph] * std::cos(p.omega_g * t + phs[ph]);
            return v;
        };

        for (long k = 0; k < n_warm; ++k) {
            // evaluate the zero-order-hold command at mid-interval so its
            // fundamental matches the continuous sinusoid the oracle assumes
            plant_step_rk4(s, p, no_events, v_cmd(s.t + 0.5 * dt), dt);
        }

        ThreePhase<std::complex<double>> acc_v{}, acc_if{}, acc_ig{};
        for (long k = 0; k < n_meas; ++k) {
            const std::complex<double> rot = std::exp(std::complex<double>(0.0, -p.omega_g * s.t));
            for (int ph = 0; ph < 3; ++ph) {
                acc_v[ph] += s.v_cf[ph] * rot;
                acc_if[ph] += s.i_lf[ph] * rot;
                acc_ig[ph] += s.i_lg[ph] * rot;
            }
            plant_step_rk4(s, p, no_events, v_cmd(s.t + 0.5 * dt), dt);
        }
        const double scale = 2.0 / static_cast<double>(n_meas);

        for (int ph = 0; ph < 3; ++ph) {
            const std::complex<double> v_inv = std::polar(amp[ph], phs[ph]);
            const std::complex<double> e_g = std::polar(std::sqrt(2.0) * p.v_ng, nominal[ph]);
            PhasorSet o = mesh_solution(p, v_inv, e_g);
            const std::complex<double> sim[3] = {acc_v[ph] * scale, acc_if[ph] * scale,
                                                 acc_ig[ph] * scale};
            const std::complex<double> ora[3] = {o.v_bus, o.i_f, o.i_g};
            for (int q = 0; q < 3; ++q) {
                const double mag_err = std::abs(std::abs(sim[q]) - std::abs(ora[q])) / std::abs(ora[q]);
                const double ph_err = std::abs(std::arg(sim[q] / ora[q])) * 180.0 / kPi;
                worst_mag = std::max(worst_mag, mag_err);
                worst_deg = std::max(worst_deg, ph_err);
            }
        }
    }

    c.pass = worst_mag <= 0.005 && worst_deg <= 0.5;
    c.detail = strf("worst magnitude error=%.4f%% (<=0.5%%) worst phase error=%.4f deg (<=0.5)",
                    100.0 * worst_mag, worst_deg);
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 9: repeated runs are byte-identical.
// ---------------------------------------------------------------------------

CriterionResult criterion_determinism(const std::map<std::string, RunResult>& results) {
    CriterionResult c{9, "byte-identical repeated run", false, ""};
    const RunResult& first = need(results, "track_900");
    RunResult second = run_scenario(first.scenario);
    const std::string a = csv_text(first);
    const std::string b = csv_text(second);
    c.pass = (a == b);
    c.detail = c.pass ? strf("two runs of %s produced identical csv output (%zu bytes)",
                             first.scenario.name.c_str(), a.size())
                      : strf("csv outputs differ (%zu vs %zu bytes)", a.size(), b.size());
    return c;
}

} // namespace

bool AcceptanceReport::all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(),
                       [](const CriterionResult& c) { return c.pass; });
}

std::string AcceptanceReport::text() const {
    std::ostringstream os;
    int passed = 0;
    for (const CriterionResult& c : criteria) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.number << ". " << c.title
           << " -- " << c.detail << "\n";
        if (c.pass) ++passed;
    }
    os << "result: " << passed << "/" << criteria.size() << " criteria passed\n";
    return os.str();
}

AcceptanceReport check_acceptance(const std::map<std::string, RunResult>& results) {
    AcceptanceReport rep;
    rep.criteria.push_back(criterion_tracking(results));
    rep.criteria.push_back(criterion_sag(results));
    rep.criteria.push_back(criterion_fault_one(results));
    rep.criteria.push_back(criterion_fault_two(results));
    rep.criteria.push_back(criterion_baseline(results));
    rep.criteria.push_back(criterion_limit_cycle());
    rep.criteria.push_back(criterion_sequence_math());
    rep.criteria.push_back(criterion_plant_phasors());
    rep.criteria.push_back(criterion_determinism(results));
    return rep;
}

AcceptanceReport run_acceptance_suite(const std::string& out_dir) {
    std::map<std::string, RunResult> results;
    for (const std::string& name : canonical_scenario_names()) {
        Scenario sc = canonical_scenario(name);
        sc.output.dir = out_dir;
        RunResult res = run_scenario(sc);
        write_outputs(res, out_dir);
        results.emplace(name, std::move(res));
    }
    AcceptanceReport rep = check_acceptance(results);
    std::filesystem::create_directories(out_dir);
    std::ofstream f(std::filesystem::path(out_dir) / "acceptance.txt", std::ios::binary);
    f << rep.text();
    return rep;
}

} // namespace svocsim
