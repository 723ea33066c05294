#include "svocsim/signals.hpp"

#include <cassert>
#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

namespace {

struct QsgDeriv {
    double dx1;
    double dx2;
};

inline QsgDeriv qsg_rhs(const QsgState& s, double x1, double x2, double u) {
    return {s.omega * (s.k * (u - x1) - x2), s.omega * x1};
}

} // namespace

QuadPair qsg_step(QsgState& s, double sample, double dt) {
    assert(dt > 0.0 && dt <= 100e-6);
    if (!std::isfinite(sample)) {
        throw NonFiniteSample("non-finite sample fed to quadrature generator");
    }
    // RK4 with the input held over the step.
    const QsgDeriv k1 = qsg_rhs(s, s.x1, s.x2, sample);
    const QsgDeriv k2 = qsg_rhs(s, s.x1 + 0.5 * dt * k1.dx1, s.x2 + 0.5 * dt * k1.dx2, sample);
    const QsgDeriv k3 = qsg_rhs(s, s.x1 + 0.5 * dt * k2.dx1, s.x2 + 0.5 * dt * k2.dx2, sample);
    const QsgDeriv k4 = qsg_rhs(s, s.x1 + dt * k3.dx1, s.x2 + dt * k3.dx2, sample);
    s.x1 += dt / 6.0 * (k1.dx1 + 2.0 * k2.dx1 + 2.0 * k3.dx1 + k4.dx1);
    s.x2 += dt / 6.0 * (k1.dx2 + 2.0 * k2.dx2 + 2.0 * k3.dx2 + k4.dx2);
    return {s.x1, s.x2};
}

SlidingRms::SlidingRms(double omega_n, double dt) {
    assert(omega_n > 0.0 && dt > 0.0);
    const auto n = static_cast<std::size_t>(std::lround(2.0 * M_PI / (omega_n * dt)));
    buf_.assign(n > 0 ? n : 1, 0.0);
}

double SlidingRms::push(double sample) {
    const double sq = sample * sample;
    sumsq_ += sq - buf_[idx_];
    buf_[idx_] = sq;
    if (++idx_ == buf_.size()) {
        idx_ = 0;
        // Rebuild the running sum once per wrap so float drift cannot
        // accumulate across long runs.
        double s = 0.0;
        for (double v : buf_) s += v;
        sumsq_ = s;
    }
    last_ = std::sqrt((sumsq_ > 0.0 ? sumsq_ : 0.0) / static_cast<double>(buf_.size()));
    return last_;
}

double lowpass_step(double& state, double sample, double cutoff_hz, double dt) {
    assert(cutoff_hz > 0.0 && dt > 0.0);
    const double a = 1.0 - std::exp(-2.0 * M_PI * cutoff_hz * dt);
    state += a * (sample - state);
    return state;
}

bool all_finite(const ThreePhase<double>& v) {
    return std::isfinite(v.a) && std::isfinite(v.b) && std::isfinite(v.c);
}

} // namespace svocsim
