#include "sqz/gaussian.hpp"

#include <array>
#include <cmath>

#include "sqz/errors.hpp"
#include "sqz/squeezed_state.hpp"

namespace sqz {

namespace {

std::array<double, 3> moment_rhs(const QuadraticGenerator& g,
                                 const std::array<double, 3>& v) {
    const double vx = v[0], vp = v[1], c = v[2];
    return {2.0 * g.h_pp * c + 2.0 * g.h_xp * vx + g.d_xx,
            -2.0 * g.h_xx * c - 2.0 * g.h_xp * vp + g.d_pp,
            g.h_pp * vp - g.h_xx * vx};
}

}  // namespace

Covariance evolve_covariance(Covariance v, const TimeGrid& grid,
                             const GeneratorFn& gen,
                             const CovarianceObserver& observer) {
    const double dt = grid.dt();
    std::array<double, 3> y = {v.vx, v.vp, v.c};
    if (observer) observer(0, 0.0, v);
    for (int step = 0; step < grid.steps; ++step) {
        const double t = grid.t(step);
        const QuadraticGenerator g1 = gen(t);
        const QuadraticGenerator g2 = gen(t + 0.5 * dt);
        const QuadraticGenerator g4 = gen(t + dt);
        const auto k1 = moment_rhs(g1, y);
        std::array<double, 3> u;
        for (int i = 0; i < 3; ++i) u[i] = y[i] + 0.5 * dt * k1[i];
        const auto k2 = moment_rhs(g2, u);
        for (int i = 0; i < 3; ++i) u[i] = y[i] + 0.5 * dt * k2[i];
        const auto k3 = moment_rhs(g2, u);
        for (int i = 0; i < 3; ++i) u[i] = y[i] + dt * k3[i];
        const auto k4 = moment_rhs(g4, u);
        for (int i = 0; i < 3; ++i)
            y[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]))
            throw InvalidStateError("covariance flow diverged");
        if (observer) observer(step + 1, grid.t(step + 1), {y[0], y[1], y[2]});
    }
    return {y[0], y[1], y[2]};
}

QuadraticGenerator trap_generator(const TrapProtocol& pr, double t) {
    const TrapControls c = pr.controls(t);
    const double m = pr.units().mass;
    const double hbar = pr.units().hbar;
    QuadraticGenerator g;
    g.h_pp = 1.0 / m;
    g.h_xx = m * c.omega_c_sq;
    g.d_pp = 2.0 * hbar * hbar * c.gamma;
    return g;
}

QuadraticGenerator raman_generator(const RamanControls& c, double omega0,
                                   const UnitSystem& units) {
    if (!(omega0 > 0.0)) throw InvalidFrequencyError("omega0 must be positive");
    const double m = units.mass;
    const double x0 = x_zpf(omega0, units);
    const double p0 = p_zpf(omega0, units);
    QuadraticGenerator g;
    g.h_xx = 2.0 * m * omega0 * c.alpha.real();
    g.h_pp = -2.0 * c.alpha.real() / (m * omega0);
    g.h_xp = -2.0 * c.alpha.imag();
    g.d_xx = 4.0 * c.kappa * x0 * x0;
    g.d_pp = 4.0 * c.kappa * p0 * p0;
    return g;
}

double gaussian_fidelity(const Covariance& a, const Covariance& b,
                         const UnitSystem& units) {
    const double s = 2.0 / units.hbar;
    // scaled covariances, vacuum = identity
    const double det_a = s * s * (a.vx * a.vp - a.c * a.c);
    const double det_b = s * s * (b.vx * b.vp - b.c * b.c);
    const double det_sum = s * s * ((a.vx + b.vx) * (a.vp + b.vp) -
                                    (a.c + b.c) * (a.c + b.c));
    if (!(det_a > 0.0) || !(det_b > 0.0))
        throw InvalidStateError("covariance is not positive definite");
    const double lam = std::max(0.0, (det_a - 1.0) * (det_b - 1.0));
    const double denom = std::sqrt(det_sum + lam) - std::sqrt(lam);
    if (!(denom > 0.0)) throw InvalidStateError("degenerate covariance pair");
    return std::min(1.0, 2.0 / denom);
}

double covariance_entropy(const Covariance& v, const UnitSystem& units) {
    const double det = v.vx * v.vp - v.c * v.c;
    if (!(det > 0.0))
        throw InvalidStateError("covariance is not positive definite");
    const double nu = 2.0 * std::sqrt(det) / units.hbar;
    if (nu <= 1.0 + 1e-12) return 0.0;
    return thermal_entropy(std::log((nu + 1.0) / (nu - 1.0)));
}

}  // namespace sqz
