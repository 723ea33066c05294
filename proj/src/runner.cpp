#include "svocsim/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "svocsim/baseline_dvoc.hpp"
#include "svocsim/errors.hpp"
#include "svocsim/frames.hpp"
#include "svocsim/plant.hpp"

namespace svocsim {

namespace {

constexpr double kPqCutoffHz = 10.0;
constexpr double kMeasFloor = 1e-6;

std::string stamp(double t, const std::string& msg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t=%.6f ", t);
    return std::string(buf) + msg;
}

std::string flag_line(const ThreePhase<bool>& f) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "fault flags: a=%d b=%d c=%d", f.a ? 1 : 0, f.b ? 1 : 0,
                  f.c ? 1 : 0);
    return buf;
}

std::unique_ptr<Controller> make_controller(const Scenario& s, const RunOptions& opt) {
    if (s.controller == "svoc") {
        auto c = std::make_unique<SvocController>(s.control);
        if (opt.seed_free) c->start_from_perturbation(0.1);
        return c;
    }
    return std::make_unique<DvocController>(s.control);
}

} // namespace

PqSample measure_pq(const SyncFrameSample& v, const SyncFrameSample& i) {
    return PqSample{0.5 * (v.d * i.d + v.q * i.q), 0.5 * (v.q * i.d - v.d * i.q)};
}

RunResult run_scenario(const Scenario& s_in, const RunOptions& opt) {
    Scenario s = s_in;
    if (opt.controller_override) s.controller = *opt.controller_override;
    if (opt.dt_plant_override) s.dt_plant = *opt.dt_plant_override;
    s.validate();

    RunResult res;
    res.scenario = s;

    const double dt = s.control.dt;
    const long n_ticks = std::lround(s.duration / dt);
    const int subs = s.plant_substeps();
    const double omega = s.control.osc.omega_n;

    std::unique_ptr<Controller> ctrl = make_controller(s, opt);
    PlantState ps = PlantState::at_grid(s.plant);

    // Runner-side measurement machinery, independent of either controller's
    // internals: quadrature generators per phase and quantity, one-cycle
    // sliding rms per phase, and 10 Hz smoothing on the power readings.
    ThreePhase<QsgState> v_qsg, i_qsg;
    for (int ph = 0; ph < 3; ++ph) {
        v_qsg[ph] = QsgState{omega, s.control.qsg_k};
        i_qsg[ph] = QsgState{omega, s.control.qsg_k};
    }
    SlidingRms rms_a(omega, dt), rms_b(omega, dt), rms_c(omega, dt);
    SlidingRms* rms[3] = {&rms_a, &rms_b, &rms_c};
    ThreePhase<double> p_lp{}, q_lp{};

    res.trace.t.reserve(n_ticks);
    res.trace.v.reserve(n_ticks);
    res.trace.i.reserve(n_ticks);
    res.trace.p.reserve(n_ticks);
    res.trace.q.reserve(n_ticks);
    res.trace.irms.reserve(n_ticks);
    res.trace.fault.reserve(n_ticks);
    res.trace.amps.reserve(n_ticks);

    std::size_t sp_idx = 0;
    const auto apply_setpoints = [&](double t_now) {
        while (sp_idx < s.setpoints.size() && s.setpoints[sp_idx].t <= t_now + 1e-12) {
            const SetpointStep& st = s.setpoints[sp_idx];
            ctrl->set_setpoints(st.per_phase);
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "setpoints: P=(%.1f,%.1f,%.1f) W Q=(%.1f,%.1f,%.1f) var",
                          st.per_phase.a.p_w, st.per_phase.b.p_w, st.per_phase.c.p_w,
                          st.per_phase.a.q_var, st.per_phase.b.q_var, st.per_phase.c.q_var);
            res.events.push_back(stamp(st.t, buf));
            ++sp_idx;
        }
    };

    ThreePhase<double> v_s = bus_voltages(ps);
    ThreePhase<double> i_s = inverter_currents(ps);
    apply_setpoints(0.0);

    // The bridge follows the voltage command with a one-tick computation
    // delay: the command active during tick k was computed from the sample
    // at the start of tick k-1.  The first two ticks run on the command
    // derived from the initial state.
    ThreePhase<double> pending = ctrl->tick(v_s, i_s);
    ThreePhase<double> applied = pending;
    ThreePhase<bool> prev_flags = ctrl->fault_flags();

    try {
        for (long k = 0; k < n_ticks; ++k) {
            const double t0 = static_cast<double>(k) * dt;
            const double t1 = static_cast<double>(k + 1) * dt;

            for (int sub = 0; sub < subs; ++sub)
                plant_step_rk4(ps, s.plant, s.events, applied, s.dt_plant);

            v_s = bus_voltages(ps);
            i_s = inverter_currents(ps);

            apply_setpoints(t1);
            applied = pending;
            pending = ctrl->tick(v_s, i_s);

            // Per-phase power against the measured bus-voltage frame.
            ThreePhase<double> p_now, q_now, irms_now;
            for (int ph = 0; ph < 3; ++ph) {
                const QuadPair vq = qsg_step(v_qsg[ph], v_s[ph], dt);
                const QuadPair iq = qsg_step(i_qsg[ph], i_s[ph], dt);
                PqSample raw{};
                const double mag = std::hypot(vq.d, vq.q);
                if (mag >= kMeasFloor) {
                    const FrameUnit u{vq.d / mag, vq.q / mag};
                    const SyncFrameSample i_sync = to_sync_frame(u, iq);
                    // The frame projection yields the conjugate reading of
                    // the current phasor; flip q into the standard
                    // convention before forming powers.
                    raw = measure_pq(SyncFrameSample{mag, 0.0},
                                     SyncFrameSample{i_sync.d, -i_sync.q});
                }
                p_now[ph] = lowpass_step(p_lp[ph], raw.p, kPqCutoffHz, dt);
                q_now[ph] = lowpass_step(q_lp[ph], raw.q, kPqCutoffHz, dt);
                irms_now[ph] = rms[ph]->push(i_s[ph]);
            }

            res.trace.t.push_back(t1);
            res.trace.v.push_back(v_s);
            res.trace.i.push_back(i_s);
            res.trace.p.push_back(p_now);
            res.trace.q.push_back(q_now);
            res.trace.irms.push_back(irms_now);
            res.trace.fault.push_back(ctrl->fault_flags());
            res.trace.amps.push_back(ctrl->amplitudes());

            for (const GridEvent& ev : s.events) {
                if (t0 < ev.t_start && ev.t_start <= t1) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf,
                                  "grid event start: scale a=%.3f b=%.3f c=%.3f", ev.scale.a,
                                  ev.scale.b, ev.scale.c);
                    res.events.push_back(stamp(ev.t_start, buf));
                }
                if (t0 < ev.t_end && ev.t_end <= t1)
                    res.events.push_back(stamp(ev.t_end, "grid event end"));
            }
            const ThreePhase<bool> flags = ctrl->fault_flags();
            if (flags.a != prev_flags.a || flags.b != prev_flags.b || flags.c != prev_flags.c) {
                res.events.push_back(stamp(t1, flag_line(flags)));
                prev_flags = flags;
            }
        }
    } catch (const SimulationError& e) {
        const double t_err = res.trace.t.empty() ? 0.0 : res.trace.t.back();
        res.error = stamp(t_err, std::string("simulation error: ") + e.what());
        res.events.push_back(*res.error);
    }
    return res;
}

std::string csv_text(const RunResult& r) {
    std::string out =
        "t,va,vb,vc,ia,ib,ic,Pa,Pb,Pc,Qa,Qb,Qc,"
        "irms_a,irms_b,irms_c,fault_a,fault_b,fault_c,amp_pos,amp_neg,amp_zero\n";
    const TickTrace& tr = r.trace;
    char buf[640];

    const auto emit = [&](double t, const ThreePhase<double>& v, const ThreePhase<double>& i,
                          const ThreePhase<double>& p, const ThreePhase<double>& q,
                          const ThreePhase<double>& irms, const ThreePhase<bool>& fault,
                          const SequenceAmplitudes& amps) {
        std::snprintf(buf, sizeof buf,
                      "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,"
                      "%.6f,%.6f,%.6f,%d,%d,%d,%.6f,%.6f,%.6f\n",
                      t, v.a, v.b, v.c, i.a, i.b, i.c, p.a, p.b, p.c, q.a, q.b, q.c, irms.a,
                      irms.b, irms.c, fault.a ? 1 : 0, fault.b ? 1 : 0, fault.c ? 1 : 0,
                      amps.pos, amps.neg, amps.zero);
        out += buf;
    };

    // Initial row: measurements before the first tick.
    emit(0.0, ThreePhase<double>{}, ThreePhase<double>{}, ThreePhase<double>{},
         ThreePhase<double>{}, ThreePhase<double>{}, ThreePhase<bool>{},
         SequenceAmplitudes{});

    const int dec = r.scenario.output.decimation;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        if ((k + 1) % static_cast<std::size_t>(dec) != 0) continue;
        emit(tr.t[k], tr.v[k], tr.i[k], tr.p[k], tr.q[k], tr.irms[k], tr.fault[k], tr.amps[k]);
    }
    if (r.error) out += "# " + *r.error + "\n";
    return out;
}

std::string metrics_text(const RunResult& r) {
    using nlohmann::json;
    const TickTrace& tr = r.trace;
    json j;
    j["name"] = r.scenario.name;
    j["controller"] = r.scenario.controller;
    j["duration_s"] = r.scenario.duration;
    j["ticks"] = tr.size();
    j["completed"] = !r.error.has_value();
    if (r.error) j["error"] = *r.error;

    if (!tr.t.empty()) {
        const std::size_t last = tr.size() - 1;
        j["final"] = json{
            {"p_w", {tr.p[last].a, tr.p[last].b, tr.p[last].c}},
            {"q_var", {tr.q[last].a, tr.q[last].b, tr.q[last].c}},
            {"irms", {tr.irms[last].a, tr.irms[last].b, tr.irms[last].c}},
            {"amp", {tr.amps[last].pos, tr.amps[last].neg, tr.amps[last].zero}},
        };
        ThreePhase<double> max_rms{};
        ThreePhase<double> fault_s{};
        for (std::size_t k = 0; k < tr.size(); ++k) {
            for (int ph = 0; ph < 3; ++ph) {
                max_rms[ph] = std::max(max_rms[ph], tr.irms[k][ph]);
                if (tr.fault[k][ph]) fault_s[ph] += r.scenario.control.dt;
            }
        }
        j["max_irms"] = {max_rms.a, max_rms.b, max_rms.c};
        j["fault_flag_seconds"] = {fault_s.a, fault_s.b, fault_s.c};
    }
    return j.dump(2) + "\n";
}

std::string write_outputs(const RunResult& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path base = fs::path(dir) / r.scenario.name;

    const fs::path csv_path = base.string() + ".csv";
    std::ofstream(csv_path) << csv_text(r);
    std::ofstream(base.string() + ".metrics.json") << metrics_text(r);

    std::ofstream ev(base.string() + ".events.log");
    for (const std::string& line : r.events) ev << line << "\n";

    return csv_path.string();
}

} // namespace svocsim
