#include "vkin/trajectory.hpp"

#include <cmath>
#include <sstream>

namespace vkin {

void guard_state(const ScalarField& u, double t, double limit)
{
    if (!u.all_finite()) {
        std::ostringstream msg;
        msg << "non-finite state at t = " << t;
        throw SolverAbort(msg.str(), t, u);
    }
    const double sup = u.max_abs();
    if (sup > limit) {
        std::ostringstream msg;
        msg << "sup norm " << sup << " exceeded the blow-up limit " << limit << " at t = " << t;
        throw SolverAbort(msg.str(), t, u);
    }
}

} // namespace vkin
