#pragma once

#include "svocsim/signals.hpp"

namespace svocsim {

// A phase's reference voltage pair: v_d plus its lagging quadrature v_q.
// The pair anchors that phase's synchronous frame.
struct PhaseReference {
    double v_d = 0.0;
    double v_q = 0.0;
};

// Constant-in-steady-state sample expressed in a phase's own frame.
struct SyncFrameSample {
    double d = 0.0;
    double q = 0.0;
};

// Unit direction of a reference pair.
struct FrameUnit {
    double d = 1.0;
    double q = 0.0;
};

// (sqrt(v_d^2 + v_q^2), 0): the reference seen in its own frame.
SyncFrameSample ref_magnitude(const PhaseReference& ref);

// Normalized (v_d, v_q); throws DegenerateReference below a 1e-6 V floor.
FrameUnit unit_direction(const PhaseReference& ref);

// Project a quadrature pair onto the frame:
//   D = u_d*s_d + u_q*s_q,  Q = u_q*s_d - u_d*s_q.
// The 2x2 matrix is orthogonal and symmetric, hence its own inverse.
SyncFrameSample to_sync_frame(const FrameUnit& u, const QuadPair& s);

// Inverse of to_sync_frame (same reflection applied again).
QuadPair from_sync_frame(const FrameUnit& u, const SyncFrameSample& s);

// Instantaneous value of a frame-domain command: u_d*cmd_d + u_q*cmd_q.
double to_instantaneous(const FrameUnit& u, const SyncFrameSample& cmd);

} // namespace svocsim
