#include "sqz/wigner.hpp"

#include <cmath>
#include <vector>

#include "sqz/errors.hpp"

namespace sqz {

RealVec linspace(double lo, double hi, int n) {
    if (n < 2) throw InvalidDimensionError("linspace needs n >= 2");
    if (!(hi > lo)) throw OutOfDomainError("linspace needs hi > lo");
    RealVec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

double WignerGrid::norm_estimate() const {
    const int nx = static_cast<int>(xs.size());
    const int np = static_cast<int>(ps.size());
    const double dx = (xs[nx - 1] - xs[0]) / (nx - 1);
    const double dp = (ps[np - 1] - ps[0]) / (np - 1);
    double total = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
        for (int j = 0; j < np; ++j) {
            const double wp = (j == 0 || j == np - 1) ? 0.5 : 1.0;
            total += wx * wp * w(i, j);
        }
    }
    return total * dx * dp;
}

namespace {

/// One grid point of the Laguerre ladder sum:
/// W = (1/pi hbar) e^{-u/2} [ sum_n (-1)^n rho_nn L_n(u)
///     + 2 Re sum_{d>=1} (2 conj(alpha))^d
///           sum_n (-1)^n sqrt(n!/(n+d)!) rho_{n+d,n} L_n^d(u) ]
/// with alpha = x/(2 x0) + i p/(2 p0), u = 4 |alpha|^2.
double wigner_point(const Mat& rho, double x, double p, double x0, double p0,
                    double hbar) {
    const int dim = static_cast<int>(rho.rows());
    const Complex alpha(x / (2.0 * x0), p / (2.0 * p0));
    const double u = 4.0 * std::norm(alpha);
    double total = 0.0;
    Complex pw(1.0, 0.0);
    const Complex step = 2.0 * std::conj(alpha);
    for (int d = 0; d < dim; ++d) {
        // g_n = (-1)^n sqrt(n!/(n+d)!), seeded at 1/sqrt(d!)
        double g = std::exp(-0.5 * std::lgamma(static_cast<double>(d) + 1.0));
        double lk2 = 0.0;
        double lk1 = 1.0;  // L_0^d
        Complex s(0.0, 0.0);
        for (int n = 0; n + d < dim; ++n) {
            if (n >= 1) {
                const double lk = ((2.0 * n - 1.0 + d - u) * lk1 -
                                   (n - 1.0 + d) * lk2) /
                                  n;
                lk2 = lk1;
                lk1 = lk;
                g *= -std::sqrt(static_cast<double>(n) /
                                (static_cast<double>(n) + d));
            }
            s += g * lk1 * rho(n + d, n);
        }
        if (d == 0)
            total += s.real();
        else
            total += 2.0 * (pw * s).real();
        pw *= step;
    }
    return total * std::exp(-0.5 * u) / (kPi * hbar);
}

}  // namespace

WignerGrid wigner_from_state(const Mat& rho, const RealVec& xs,
                             const RealVec& ps, double basis_omega,
                             const UnitSystem& units, Backend backend) {
    if (rho.rows() != rho.cols() || rho.rows() < 2)
        throw InvalidDimensionError("wigner needs a square state, dim >= 2");
    if (xs.size() < 2 || ps.size() < 2)
        throw InvalidDimensionError("wigner needs >= 2 grid points per axis");
    if (!(basis_omega > 0.0))
        throw InvalidFrequencyError("wigner basis omega must be positive");
    const double x0 = x_zpf(basis_omega, units);
    const double p0 = p_zpf(basis_omega, units);
    WignerGrid grid;
    grid.xs = xs;
    grid.ps = ps;
    grid.w.resize(xs.size(), ps.size());
    const int nx = static_cast<int>(xs.size());
    const int np = static_cast<int>(ps.size());
    if (backend == Backend::serial_reference) {
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < np; ++j)
                grid.w(i, j) =
                    wigner_point(rho, xs[i], ps[j], x0, p0, units.hbar);
        return grid;
    }
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < np; ++j)
            grid.w(i, j) = wigner_point(rho, xs[i], ps[j], x0, p0, units.hbar);
    return grid;
}

WignerGrid wigner_gaussian(const Covariance& v, const RealVec& xs,
                           const RealVec& ps, const UnitSystem& units) {
    (void)units;
    if (xs.size() < 2 || ps.size() < 2)
        throw InvalidDimensionError("wigner needs >= 2 grid points per axis");
    const double det = v.det();
    if (!(det > 0.0))
        throw InvalidStateError("covariance must be positive definite");
    WignerGrid grid;
    grid.xs = xs;
    grid.ps = ps;
    grid.w.resize(xs.size(), ps.size());
    const double norm = 1.0 / (2.0 * kPi * std::sqrt(det));
    for (int i = 0; i < xs.size(); ++i) {
        for (int j = 0; j < ps.size(); ++j) {
            const double x = xs[i];
            const double p = ps[j];
            const double q =
                (v.vp * x * x - 2.0 * v.c * x * p + v.vx * p * p) / det;
            grid.w(i, j) = norm * std::exp(-0.5 * q);
        }
    }
    return grid;
}

double max_abs_diff(const WignerGrid& a, const WignerGrid& b) {
    if (a.w.rows() != b.w.rows() || a.w.cols() != b.w.cols())
        throw DimensionMismatchError("wigner grids differ in shape");
    return (a.w - b.w).cwiseAbs().maxCoeff();
}

}  // namespace sqz
