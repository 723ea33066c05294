#include "svocsim/frames.hpp"

#include <cmath>

#include "svocsim/errors.hpp"

namespace svocsim {

SyncFrameSample ref_magnitude(const PhaseReference& ref) {
    return {std::hypot(ref.v_d, ref.v_q), 0.0};
}

FrameUnit unit_direction(const PhaseReference& ref) {
    const double mag = std::hypot(ref.v_d, ref.v_q);
    if (mag < 1e-6) {
        throw DegenerateReference(mag);
    }
    return {ref.v_d / mag, ref.v_q / mag};
}

SyncFrameSample to_sync_frame(const FrameUnit& u, const QuadPair& s) {
    return {u.d * s.d + u.q * s.q, u.q * s.d - u.d * s.q};
}

QuadPair from_sync_frame(const FrameUnit& u, const SyncFrameSample& s) {
    return {u.d * s.d + u.q * s.q, u.q * s.d - u.d * s.q};
}

double to_instantaneous(const FrameUnit& u, const SyncFrameSample& cmd) {
    return u.d * cmd.d + u.q * cmd.q;
}

} // namespace svocsim
