#pragma once

#include <cstddef>
#include <vector>

namespace svocsim {

// Per-phase container for any three-phase quantity.
template <typename T>
struct ThreePhase {
    T a{};
    T b{};
    T c{};

    T& operator[](int i) { return i == 0 ? a : (i == 1 ? b : c); }
    const T& operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

// In-phase component and its lagging (-90 deg) quadrature companion.
struct QuadPair {
    double d = 0.0;
    double q = 0.0;
};

// Second-order generalized integrator quadrature signal generator tuned at
// omega.  step() band-passes the input and returns the fundamental estimate d
// together with q lagging d by a quarter period (unity gain at omega).
struct QsgState {
    double omega;      // tuned frequency (rad/s)
    double k;          // damping gain, sqrt(2) gives ~0.707 zeta
    double x1 = 0.0;   // band-pass state = d output
    double x2 = 0.0;   // quadrature state = q output
};

// Advance one sample of duration dt (ZOH input).  Rejects non-finite samples.
QuadPair qsg_step(QsgState& s, double sample, double dt);

// RMS over exactly the trailing fundamental period (window pre-filled with
// zeros until one full period of samples has been pushed).
class SlidingRms {
public:
    SlidingRms(double omega_n, double dt);

    double push(double sample);
    double value() const { return last_; }
    std::size_t window_size() const { return buf_.size(); }

private:
    std::vector<double> buf_; // squared samples
    std::size_t idx_ = 0;
    double sumsq_ = 0.0;
    double last_ = 0.0;
};

// One step of a first-order low-pass: state tracks sample with time constant
// 1/(2*pi*cutoff_hz).  Returns the updated state.
double lowpass_step(double& state, double sample, double cutoff_hz, double dt);

bool all_finite(const ThreePhase<double>& v);

} // namespace svocsim
