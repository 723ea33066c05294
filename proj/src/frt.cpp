#include "svocsim/frt.hpp"

#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

FaultDetector::FaultDetector(double v_nominal_rms, double omega_n, double dt)
    : v_n_(v_nominal_rms),
      dwell_ticks_(static_cast<int>(std::lround(2.0 * 3.14159265358979323846 / (omega_n * dt)))),
      rms_a_(omega_n, dt),
      rms_b_(omega_n, dt),
      rms_c_(omega_n, dt) {
    if (!(v_nominal_rms > 0.0)) throw ConfigError("detector nominal voltage must be positive");
}

ThreePhase<bool> FaultDetector::update(const ThreePhase<double>& v_samples) {
    const ThreePhase<double> r{rms_a_.push(v_samples.a), rms_b_.push(v_samples.b),
                               rms_c_.push(v_samples.c)};
    for (int ph = 0; ph < 3; ++ph) {
        // Hysteresis comparator on the per-unit rms.
        const bool was = latched_[ph];
        const double pu = r[ph] / v_n_;
        const bool raw = was ? (pu < kClearPu) : (pu < kEnterPu);
        if (raw != was) {
            if (++pending_[ph] >= dwell_ticks_) {
                latched_[ph] = raw;
                pending_[ph] = 0;
            }
        } else {
            pending_[ph] = 0;
        }
    }
    return reported();
}

ThreePhase<bool> FaultDetector::reported() const {
    if (latched_.a && latched_.b && latched_.c) return ThreePhase<bool>{false, false, false};
    return latched_;
}

ThreePhase<double> FaultDetector::rms() const {
    return ThreePhase<double>{rms_a_.value(), rms_b_.value(), rms_c_.value()};
}

namespace {

int count_flags(const ThreePhase<bool>& f) {
    return (f.a ? 1 : 0) + (f.b ? 1 : 0) + (f.c ? 1 : 0);
}

} // namespace

QuadPair estimate_one_fault(const ThreePhase<QuadPair>& meas, const ThreePhase<bool>& faulty) {
    const int n = count_flags(faulty);
    if (n != 1) throw WrongFaultCount(n);
    // Quadrature pairs are time-shifted sample pairs, so they add phase-wise;
    // the zero-sum estimate is minus the sum of the healthy pairs.
    QuadPair est{0.0, 0.0};
    for (int ph = 0; ph < 3; ++ph) {
        if (faulty[ph]) continue;
        est.d -= meas[ph].d;
        est.q -= meas[ph].q;
    }
    return est;
}

ThreePhase<QuadPair> estimate_two_faults(const ThreePhase<QuadPair>& meas,
                                         const ThreePhase<FrameUnit>& frames,
                                         const ThreePhase<bool>& faulty) {
    const int n = count_flags(faulty);
    if (n != 2) throw WrongFaultCount(n);
    int healthy = 0;
    for (int ph = 0; ph < 3; ++ph)
        if (!faulty[ph]) healthy = ph;
    // The healthy phase's phasor relative to its own reference, replayed
    // relative to each faulty phase's reference: the controller sees a
    // balanced loading pattern.
    const SyncFrameSample own = to_sync_frame(frames[healthy], meas[healthy]);
    ThreePhase<QuadPair> out = meas;
    for (int ph = 0; ph < 3; ++ph) {
        if (faulty[ph]) out[ph] = from_sync_frame(frames[ph], own);
    }
    return out;
}

ThreePhase<QuadPair> substitute_feedback(const ThreePhase<QuadPair>& meas,
                                         const ThreePhase<FrameUnit>& frames,
                                         const ThreePhase<bool>& faulty) {
    switch (count_flags(faulty)) {
        case 1: {
            ThreePhase<QuadPair> out = meas;
            for (int ph = 0; ph < 3; ++ph)
                if (faulty[ph]) out[ph] = estimate_one_fault(meas, faulty);
            return out;
        }
        case 2:
            return estimate_two_faults(meas, frames, faulty);
        default:
            return meas;
    }
}

} // namespace svocsim
