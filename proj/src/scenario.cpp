#include "svocsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svocsim/errors.hpp"

namespace svocsim {

namespace {

using nlohmann::json;

void require_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return it.key() == k; });
        if (!known)
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw ConfigError(std::string("'") + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

ThreePhase<double> get_phase_triple(const json& j, const char* where) {
    require_keys(j, where, {"a", "b", "c"});
    return ThreePhase<double>{get_num(j, "a", 1.0), get_num(j, "b", 1.0), get_num(j, "c", 1.0)};
}

void parse_control(const json& j, ControllerConfig& c, double& i_max_rms) {
    require_keys(j, "control",
                 {"v_n", "omega_n", "xi", "k_v", "k_i", "c_osc", "feedback_sign",
                  "osc_substeps", "t_s", "qsg_k", "frt", "kp_v", "ki_v", "kp_c", "ki_c",
                  "i_max", "v_ceiling"});
    c.osc.v_n = get_num(j, "v_n", c.osc.v_n);
    c.osc.omega_n = get_num(j, "omega_n", c.osc.omega_n);
    c.osc.xi = get_num(j, "xi", c.osc.xi);
    c.osc.k_v = get_num(j, "k_v", c.osc.k_v);
    c.osc.k_i = get_num(j, "k_i", c.osc.k_i);
    c.osc.c_osc = get_num(j, "c_osc", c.osc.c_osc);
    c.osc.feedback_sign = get_num(j, "feedback_sign", c.osc.feedback_sign);
    c.osc.substeps = static_cast<int>(get_num(j, "osc_substeps", c.osc.substeps));
    c.dt = get_num(j, "t_s", c.dt);
    c.qsg_k = get_num(j, "qsg_k", c.qsg_k);
    c.frt_enabled = get_bool(j, "frt", c.frt_enabled);
    c.loops.voltage.kp = get_num(j, "kp_v", c.loops.voltage.kp);
    c.loops.voltage.ki = get_num(j, "ki_v", c.loops.voltage.ki);
    c.loops.current.kp = get_num(j, "kp_c", c.loops.current.kp);
    c.loops.current.ki = get_num(j, "ki_c", c.loops.current.ki);
    i_max_rms = get_num(j, "i_max", i_max_rms);
    c.loops.v_ceiling = get_num(j, "v_ceiling", c.loops.v_ceiling);
}

void parse_plant(const json& j, PlantParams& p, double& dt_plant) {
    require_keys(j, "plant",
                 {"l_f", "c_f", "l_g", "r_f", "r_g", "c_g", "load_r", "load_l", "v_ng",
                  "omega_ng", "three_wire", "grid_connected", "dt"});
    p.l_f = get_num(j, "l_f", p.l_f);
    p.c_f = get_num(j, "c_f", p.c_f);
    p.l_g = get_num(j, "l_g", p.l_g);
    p.r_f = get_num(j, "r_f", p.r_f);
    p.r_g = get_num(j, "r_g", p.r_g);
    p.c_g = get_num(j, "c_g", p.c_g);
    p.load_r = get_num(j, "load_r", p.load_r);
    p.load_l = get_num(j, "load_l", p.load_l);
    p.v_ng = get_num(j, "v_ng", p.v_ng);
    p.omega_g = get_num(j, "omega_ng", p.omega_g);
    p.three_wire = get_bool(j, "three_wire", p.three_wire);
    p.grid_connected = get_bool(j, "grid_connected", p.grid_connected);
    dt_plant = get_num(j, "dt", dt_plant);
}

ThreePhase<PowerSetpoints> parse_setpoint_values(const json& j) {
    if (j.contains("p_w") || j.contains("q_var")) {
        const auto read_triple = [&](const char* key) -> ThreePhase<double> {
            if (!j.contains(key)) return ThreePhase<double>{};
            const json& arr = j.at(key);
            if (!arr.is_array() || arr.size() != 3)
                throw ConfigError(std::string("'") + key + "' must be a three-entry array");
            return ThreePhase<double>{arr[0].get<double>(), arr[1].get<double>(),
                                      arr[2].get<double>()};
        };
        const ThreePhase<double> p = read_triple("p_w");
        const ThreePhase<double> q = read_triple("q_var");
        ThreePhase<PowerSetpoints> sp;
        for (int ph = 0; ph < 3; ++ph) sp[ph] = PowerSetpoints{p[ph], q[ph]};
        return sp;
    }
    const double p3 = get_num(j, "p_total_w", 0.0);
    const double q3 = get_num(j, "q_total_var", 0.0);
    const PowerSetpoints each{p3 / 3.0, q3 / 3.0};
    return ThreePhase<PowerSetpoints>{each, each, each};
}

json setpoint_to_json(const SetpointStep& st) {
    return json{{"t", st.t},
                {"p_w", {st.per_phase.a.p_w, st.per_phase.b.p_w, st.per_phase.c.p_w}},
                {"q_var", {st.per_phase.a.q_var, st.per_phase.b.q_var, st.per_phase.c.q_var}}};
}

} // namespace

int Scenario::plant_substeps() const {
    return static_cast<int>(std::lround(control.dt / dt_plant));
}

void Scenario::validate() const {
    if (name.empty()) throw ConfigError("scenario needs a name");
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");
    if (controller != "svoc" && controller != "dvoc_baseline")
        throw ConfigError("controller must be 'svoc' or 'dvoc_baseline'");
    control.validate();
    plant.validate();
    if (!(dt_plant > 0.0)) throw ConfigError("plant step must be positive");
    const int sub = plant_substeps();
    if (sub < 1 || std::abs(sub * dt_plant - control.dt) > 1e-12)
        throw ConfigError("controller period must be an integer multiple of the plant step");
    if (!(i_max_rms > 0.0)) throw ConfigError("current limit must be positive");
    if (!(s_rated_va > 0.0)) throw ConfigError("rated power must be positive");
    if (output.decimation < 1) throw ConfigError("decimation must be at least 1");

    if (setpoints.empty()) throw ConfigError("at least one setpoint entry is required");
    if (setpoints.front().t != 0.0) throw ConfigError("first setpoint entry must be at t = 0");
    const double phase_va = s_rated_va / 3.0;
    double prev_t = -1.0;
    for (const SetpointStep& st : setpoints) {
        if (st.t <= prev_t) throw ConfigError("setpoint entries must be strictly increasing in t");
        if (st.t < 0.0 || st.t > duration)
            throw ConfigError("setpoint times must lie within [0, duration]");
        for (int ph = 0; ph < 3; ++ph) {
            const PowerSetpoints& sp = st.per_phase[ph];
            if (!std::isfinite(sp.p_w) || !std::isfinite(sp.q_var))
                throw ConfigError("setpoints must be finite");
            if (std::hypot(sp.p_w, sp.q_var) > phase_va + 1e-9)
                throw ConfigError("per-phase setpoint exceeds rated phase VA");
        }
        prev_t = st.t;
    }

    validate_events(events);
    for (const GridEvent& e : events) {
        if (e.t_start < 0.0 || e.t_end > duration)
            throw ConfigError("grid events must lie within [0, duration]");
    }
}

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario root must be a JSON object");
    require_keys(j, "scenario",
                 {"name", "duration", "controller", "control", "plant", "setpoints", "events",
                  "s_rated", "output"});

    Scenario s;
    if (!j.contains("name") || !j.at("name").is_string())
        throw ConfigError("scenario needs a string 'name'");
    s.name = j.at("name").get<std::string>();
    s.duration = get_num(j, "duration", s.duration);
    if (j.contains("controller")) s.controller = j.at("controller").get<std::string>();
    if (j.contains("control")) parse_control(j.at("control"), s.control, s.i_max_rms);
    if (j.contains("plant")) parse_plant(j.at("plant"), s.plant, s.dt_plant);
    s.s_rated_va = get_num(j, "s_rated", s.s_rated_va);
    s.control.loops.i_limit_peak = std::sqrt(2.0) * s.i_max_rms;

    if (j.contains("setpoints")) {
        const json& arr = j.at("setpoints");
        if (!arr.is_array()) throw ConfigError("'setpoints' must be an array");
        s.setpoints.clear();
        for (const json& e : arr) {
            require_keys(e, "setpoint entry", {"t", "p_total_w", "q_total_var", "p_w", "q_var"});
            SetpointStep st;
            st.t = get_num(e, "t", 0.0);
            st.per_phase = parse_setpoint_values(e);
            s.setpoints.push_back(st);
        }
    }
    if (j.contains("events")) {
        const json& arr = j.at("events");
        if (!arr.is_array()) throw ConfigError("'events' must be an array");
        for (const json& e : arr) {
            require_keys(e, "grid event", {"t_start", "t_end", "scale"});
            GridEvent ev;
            ev.t_start = get_num(e, "t_start", 0.0);
            ev.t_end = get_num(e, "t_end", 0.0);
            if (e.contains("scale")) ev.scale = get_phase_triple(e.at("scale"), "event scale");
            s.events.push_back(ev);
        }
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        require_keys(o, "output", {"decimation", "dir"});
        s.output.decimation = static_cast<int>(get_num(o, "decimation", s.output.decimation));
        if (o.contains("dir")) s.output.dir = o.at("dir").get<std::string>();
    }

    s.validate();
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["duration"] = s.duration;
    j["controller"] = s.controller;
    j["control"] = json{{"v_n", s.control.osc.v_n},
                        {"omega_n", s.control.osc.omega_n},
                        {"xi", s.control.osc.xi},
                        {"k_v", s.control.osc.k_v},
                        {"k_i", s.control.osc.k_i},
                        {"c_osc", s.control.osc.c_osc},
                        {"feedback_sign", s.control.osc.feedback_sign},
                        {"osc_substeps", s.control.osc.substeps},
                        {"t_s", s.control.dt},
                        {"qsg_k", s.control.qsg_k},
                        {"frt", s.control.frt_enabled},
                        {"kp_v", s.control.loops.voltage.kp},
                        {"ki_v", s.control.loops.voltage.ki},
                        {"kp_c", s.control.loops.current.kp},
                        {"ki_c", s.control.loops.current.ki},
                        {"i_max", s.i_max_rms},
                        {"v_ceiling", s.control.loops.v_ceiling}};
    j["plant"] = json{{"l_f", s.plant.l_f},       {"c_f", s.plant.c_f},
                      {"l_g", s.plant.l_g},       {"r_f", s.plant.r_f},
                      {"r_g", s.plant.r_g},       {"c_g", s.plant.c_g},
                      {"load_r", s.plant.load_r}, {"load_l", s.plant.load_l},
                      {"v_ng", s.plant.v_ng},     {"omega_ng", s.plant.omega_g},
                      {"three_wire", s.plant.three_wire},
                      {"grid_connected", s.plant.grid_connected},
                      {"dt", s.dt_plant}};
    j["s_rated"] = s.s_rated_va;
    j["setpoints"] = json::array();
    for (const SetpointStep& st : s.setpoints) j["setpoints"].push_back(setpoint_to_json(st));
    j["events"] = json::array();
    for (const GridEvent& e : s.events) {
        j["events"].push_back(json{{"t_start", e.t_start},
                                   {"t_end", e.t_end},
                                   {"scale", {{"a", e.scale.a}, {"b", e.scale.b}, {"c", e.scale.c}}}});
    }
    j["output"] = json{{"decimation", s.output.decimation}, {"dir", s.output.dir}};
    return j.dump(2) + "\n";
}

namespace {

SetpointStep total_setpoint(double t, double p_total, double q_total) {
    const PowerSetpoints each{p_total / 3.0, q_total / 3.0};
    return SetpointStep{t, ThreePhase<PowerSetpoints>{each, each, each}};
}

GridEvent scale_event(double t0, double t1, double sa, double sb, double sc) {
    return GridEvent{t0, t1, ThreePhase<double>{sa, sb, sc}};
}

} // namespace

std::vector<std::string> canonical_scenario_names() {
    return {"track_900", "sag_a_090", "fault_a_010", "fault_bc_005", "fault_a_010_dvoc"};
}

Scenario canonical_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "track_900") {
        // Balanced power-tracking step: 600 W -> 900 W at t = 1 s.
        s.duration = 2.5;
        s.setpoints = {total_setpoint(0.0, 600.0, 0.0), total_setpoint(1.0, 900.0, 0.0)};
    } else if (name == "sag_a_090") {
        // 10% amplitude sag on phase a for the rest of the run.
        s.duration = 3.0;
        s.setpoints = {total_setpoint(0.0, 600.0, 0.0)};
        s.events = {scale_event(0.5, 3.0, 0.9, 1.0, 1.0)};
    } else if (name == "fault_a_010") {
        // Deep single-phase fault: phase a down to 0.1 pu.
        s.duration = 6.0;
        s.setpoints = {total_setpoint(0.0, 600.0, 0.0)};
        s.events = {scale_event(0.5, 5.5, 0.1, 1.0, 1.0)};
    } else if (name == "fault_bc_005") {
        // Deep two-phase fault: phases b and c down to 0.05 pu.
        s.duration = 6.0;
        s.setpoints = {total_setpoint(0.0, 600.0, 0.0)};
        s.events = {scale_event(0.5, 5.5, 1.0, 0.05, 0.05)};
    } else if (name == "fault_a_010_dvoc") {
        // The single-phase fault replayed under the baseline controller.
        s.duration = 6.0;
        s.controller = "dvoc_baseline";
        s.setpoints = {total_setpoint(0.0, 600.0, 0.0)};
        s.events = {scale_event(0.5, 5.5, 0.1, 1.0, 1.0)};
    } else {
        throw MissingScenario(name);
    }
    s.validate();
    return s;
}

} // namespace svocsim
