#ifndef SQZ_SCHEDULE_HPP
#define SQZ_SCHEDULE_HPP

#include <algorithm>
#include <cmath>

#include "sqz/errors.hpp"

namespace sqz {

/// Minimal-jerk switch on [0, 1]: p(0)=0, p(1)=1 and p', p'' vanish at both
/// ends, so any control built on it starts and ends perfectly flat.
inline double quintic(double tau) {
    return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
}

inline double quintic_d(double tau) {
    const double u = tau * (1.0 - tau);
    return 30.0 * u * u;
}

inline double quintic_dd(double tau) {
    return tau * (60.0 + tau * (-180.0 + 120.0 * tau));
}

/// a -> b over [0, tf] riding the quintic switch. Evaluation outside the
/// window clamps to the endpoints (integrators overshoot tf by round-off),
/// where the first two derivatives vanish anyway.
struct SmoothRamp {
    double a = 0.0;
    double b = 0.0;
    double tf = 1.0;

    static SmoothRamp between(double a, double b, double tf) {
        if (!(tf > 0.0)) throw InvalidScheduleError("ramp needs tf > 0");
        return SmoothRamp{a, b, tf};
    }

    double tau(double t) const { return std::clamp(t / tf, 0.0, 1.0); }
    double value(double t) const { return a + (b - a) * quintic(tau(t)); }
    double deriv(double t) const {
        return (b - a) * quintic_d(tau(t)) / tf;
    }
    double second(double t) const {
        return (b - a) * quintic_dd(tau(t)) / (tf * tf);
    }
};

struct TimeGrid {
    double tf = 1.0;
    int steps = 1;

    static TimeGrid uniform(double tf, int steps) {
        if (!(tf > 0.0) || steps < 1)
            throw InvalidScheduleError("grid needs tf > 0 and steps >= 1");
        return TimeGrid{tf, steps};
    }

    double dt() const { return tf / steps; }
    double t(int k) const { return tf * (double(k) / steps); }
};

}  // namespace sqz

#endif
