#include "sqz/master.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "sqz/errors.hpp"
#include "sqz/fock.hpp"

namespace sqz {

Mat propagate(Mat rho, const TimeGrid& grid, const MasterRhs& rhs,
              const PropagateOptions& opt, const StepObserver& observer,
              PropagateStats* stats) {
    if (rho.rows() != rho.cols() || rho.rows() < 2)
        throw InvalidDimensionError("propagate needs a square state, dim >= 2");
    const int n = static_cast<int>(rho.rows());
    const double dt = grid.dt();
    Mat k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    if (observer) observer(0, 0.0, rho);
    for (int step = 0; step < grid.steps; ++step) {
        const double t = grid.t(step);
        rhs(t, rho, k1);
        tmp = rho + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = rho + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = rho + dt * k3;
        rhs(t + dt, tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (opt.hermitize) {
            tmp = 0.5 * (rho - rho.adjoint());
            if (stats)
                stats->max_hermiticity_correction =
                    std::max(stats->max_hermiticity_correction, tmp.norm());
            rho -= tmp;
        }
        if (opt.renormalize_trace) {
            const double tr = rho.trace().real();
            if (!(tr > 0.0) || !std::isfinite(tr))
                throw InvalidStateError(
                    "trace collapsed during renormalized propagation");
            rho /= tr;
        } else {
            const double drift = std::abs(rho.trace().real() - 1.0) +
                                 std::abs(rho.trace().imag());
            if (stats)
                stats->max_trace_drift = std::max(stats->max_trace_drift, drift);
            if (opt.max_trace_drift > 0.0 && drift > opt.max_trace_drift)
                throw StepSizeError(
                    "trace drift " + std::to_string(drift) + " at t = " +
                        std::to_string(grid.t(step + 1)) +
                        " exceeds the bound; the step is too coarse",
                    0.5 * dt);
        }
        if (observer) observer(step + 1, grid.t(step + 1), rho);
    }
    return rho;
}

void require_step(double dt, double max_rate) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidScheduleError("step size must be positive and finite");
    if (!(max_rate >= 0.0) || !std::isfinite(max_rate))
        throw InvalidScheduleError("rate scale must be finite and non-negative");
    if (dt * max_rate > 1e-2)
        throw StepSizeError("step too coarse for the fastest control rate: dt * rate = " +
                                std::to_string(dt * max_rate) + " > 0.01",
                            5e-3 / max_rate);
}

double trap_rate_scale(const TrapProtocol& pr, int grid_points) {
    if (grid_points < 2) throw InvalidScheduleError("rate scan needs >= 2 points");
    const double x0 = x_zpf(pr.omega_0(), pr.units());
    double rate = 0.0;
    for (int k = 0; k <= grid_points; ++k) {
        const TrapControls c = pr.controls(pr.tf() * k / grid_points);
        rate = std::max(rate, std::sqrt(std::abs(c.omega_c_sq)));
        rate = std::max(rate, std::abs(c.Omega0 + c.Omega1));
        rate = std::max(rate, std::abs(c.gamma) * x0 * x0);
    }
    return rate;
}

double raman_rate_scale(const std::function<RamanControls(double)>& controls,
                        double tf, int grid_points) {
    if (!(tf > 0.0)) throw InvalidScheduleError("rate scan needs tf > 0");
    if (grid_points < 2) throw InvalidScheduleError("rate scan needs >= 2 points");
    double rate = 0.0;
    for (int k = 0; k <= grid_points; ++k) {
        const RamanControls c = controls(tf * k / grid_points);
        rate = std::max(rate, std::abs(c.alpha));
        rate = std::max(rate, std::abs(c.kappa));
    }
    return rate;
}

MasterRhs trap_coeff_rhs(std::function<double(double)> omega_c_sq,
                         std::function<double(double)> gamma,
                         double basis_omega, int dim, Backend backend,
                         const UnitSystem& units) {
    if (dim < 2) throw InvalidDimensionError("trap rhs needs dim >= 2");
    if (!(basis_omega > 0.0))
        throw InvalidFrequencyError("trap rhs needs basis omega > 0");
    const double m = units.mass;
    const double hbar = units.hbar;

    if (backend == Backend::serial_reference) {
        auto [x, p] = quadratures(dim, basis_omega, units);
        const Mat x2 = x * x;
        const Mat hkin = p * p / (2.0 * m);
        return [omega_c_sq, gamma, x, x2, hkin, m, hbar](double t,
                                                         const Mat& rho,
                                                         Mat& out) {
            const Mat h = hkin + (0.5 * m * omega_c_sq(t)) * x2;
            out = (-kI / hbar) * (h * rho - rho * h);
            const double g = gamma(t);
            if (g != 0.0) {
                const Mat xr = x * rho;
                // [x,[x,rho]] = x^2 rho - 2 x rho x + rho x^2
                out -= g * (x * xr - 2.0 * (xr * x) + rho * x2);
            }
        };
    }

    const BandedOp xb = banded_x(dim, basis_omega, units);
    const BandedOp x2b = multiply(xb, xb);
    const BandedOp pb = banded_p(dim, basis_omega, units);
    const BandedOp p2b = multiply(pb, pb);
    // x^2 and p^2 both span offsets [-2, 2], so their band blocks add directly.
    auto h = std::make_shared<BandedOp>(BandedOp::zero(dim, -2, 2));
    auto t1 = std::make_shared<Mat>(Mat::Zero(dim, dim));
    auto t2 = std::make_shared<Mat>(Mat::Zero(dim, dim));
    return [omega_c_sq, gamma, xb, x2b, p2b, h, t1, t2, m, hbar](
               double t, const Mat& rho, Mat& out) {
        h->bands =
            p2b.bands / (2.0 * m) + (0.5 * m * omega_c_sq(t)) * x2b.bands;
        band_mul_left(*h, rho, out);
        out *= -kI / hbar;
        band_mul_right_acc(kI / hbar, rho, *h, out);
        const double gv = gamma(t);
        if (gv != 0.0) {
            band_mul_left(xb, rho, *t1);
            band_mul_right(rho, xb, *t2);
            const Complex g(gv, 0.0);
            band_mul_left_acc(-g, xb, *t1, out);
            band_mul_right_acc(2.0 * g, *t1, xb, out);
            band_mul_right_acc(-g, *t2, xb, out);
        }
    };
}

MasterRhs trap_rhs(const TrapProtocol& pr, int dim, Backend backend) {
    return trap_coeff_rhs(
        [pr](double t) { return pr.controls(t).omega_c_sq; },
        [pr](double t) { return pr.controls(t).gamma; }, pr.omega_0(), dim,
        backend, pr.units());
}

MasterRhs raman_rhs(std::function<RamanControls(double)> controls, int dim,
                    RamanScheme scheme, Backend backend) {
    if (dim < 2) throw InvalidDimensionError("raman_rhs needs dim >= 2");

    if (backend == Backend::serial_reference) {
        const Mat a = ladder(dim);
        const Mat ad = a.adjoint();
        const Mat a2 = a * a;
        const Mat ad2 = ad * ad;
        const Mat num = ad * a;
        const Mat q = a + ad;
        return [controls, a, ad, a2, ad2, num, q, scheme](double t, const Mat& rho,
                                                          Mat& out) {
            const RamanControls c = controls(t);
            const Mat h = c.alpha * a2 + std::conj(c.alpha) * ad2;
            out = -kI * (h * rho - rho * h);
            if (c.kappa == 0.0) return;
            if (scheme == RamanScheme::two_laser) {
                // 2k (D(a) + D(a^dag)) = 2k (a rho a^dag + a^dag rho a
                //                             - n rho - rho n - rho)
                out += 2.0 * c.kappa *
                       (a * rho * ad + ad * rho * a - num * rho - rho * num - rho);
            } else {
                // linear norm-shedding flow; renormalize the trace per step
                out += (0.25 * c.kappa) * (q * rho * q);
            }
        };
    }

    const BandedOp ab = banded_ladder(dim);
    const BandedOp adb = banded_ladder_dag(dim);
    const BandedOp nb = banded_number(dim);
    BandedOp qb = ab;
    qb.accumulate(Complex(1.0, 0.0), adb);
    const BandedOp a2b = banded_a2(dim);
    const BandedOp ad2b = banded_adag2(dim);
    auto hb = std::make_shared<BandedOp>(BandedOp::zero(dim, -2, 2));
    auto t1 = std::make_shared<Mat>(Mat::Zero(dim, dim));
    auto t2 = std::make_shared<Mat>(Mat::Zero(dim, dim));
    return [controls, ab, adb, nb, qb, a2b, ad2b, hb, t1, t2, scheme](
               double t, const Mat& rho, Mat& out) {
        const RamanControls c = controls(t);
        hb->bands.setZero();
        hb->accumulate(c.alpha, a2b);
        hb->accumulate(std::conj(c.alpha), ad2b);
        band_mul_left(*hb, rho, out);
        out *= -kI;
        band_mul_right_acc(kI, rho, *hb, out);
        if (c.kappa == 0.0) return;
        const Complex k2(2.0 * c.kappa, 0.0);
        if (scheme == RamanScheme::two_laser) {
            band_mul_left(ab, rho, *t1);
            band_mul_right_acc(k2, *t1, adb, out);
            band_mul_left(adb, rho, *t1);
            band_mul_right_acc(k2, *t1, ab, out);
            band_mul_left_acc(-k2, nb, rho, out);
            band_mul_right_acc(-k2, rho, nb, out);
            out -= (2.0 * c.kappa) * rho;
        } else {
            band_mul_left(qb, rho, *t2);
            band_mul_right_acc(Complex(0.25 * c.kappa, 0.0), *t2, qb, out);
        }
    };
}

MasterRhs raman_prerwa_rhs(std::function<RamanControls(double)> controls,
                           double omega0, int dim, Backend backend) {
    if (dim < 2) throw InvalidDimensionError("raman_prerwa_rhs needs dim >= 2");
    if (!(omega0 > 0.0)) throw InvalidFrequencyError("omega0 must be positive");

    if (backend == Backend::serial_reference) {
        const Mat a = ladder(dim);
        const Mat ad = a.adjoint();
        const Mat a2 = a * a;
        const Mat ad2 = ad * ad;
        return [controls, omega0, a, ad, a2, ad2](double t, const Mat& rho,
                                                  Mat& out) {
            const RamanControls c = controls(t);
            const Mat h = c.alpha * a2 + std::conj(c.alpha) * ad2;
            out = -kI * (h * rho - rho * h);
            if (c.kappa == 0.0) return;
            const Complex ph = std::exp(-kI * (omega0 * t));
            const Mat qt = ph * a + std::conj(ph) * ad;
            const Mat qr = qt * rho;
            out -= c.kappa * (qt * qr - 2.0 * (qr * qt) + rho * (qt * qt));
        };
    }

    const BandedOp ab = banded_ladder(dim);
    const BandedOp adb = banded_ladder_dag(dim);
    const BandedOp a2b = banded_a2(dim);
    const BandedOp ad2b = banded_adag2(dim);
    auto hb = std::make_shared<BandedOp>(BandedOp::zero(dim, -2, 2));
    auto qt = std::make_shared<BandedOp>(BandedOp::zero(dim, -1, 1));
    auto t1 = std::make_shared<Mat>(Mat::Zero(dim, dim));
    auto t2 = std::make_shared<Mat>(Mat::Zero(dim, dim));
    return [controls, omega0, ab, adb, a2b, ad2b, hb, qt, t1, t2](
               double t, const Mat& rho, Mat& out) {
        const RamanControls c = controls(t);
        hb->bands.setZero();
        hb->accumulate(c.alpha, a2b);
        hb->accumulate(std::conj(c.alpha), ad2b);
        band_mul_left(*hb, rho, out);
        out *= -kI;
        band_mul_right_acc(kI, rho, *hb, out);
        if (c.kappa == 0.0) return;
        const Complex ph = std::exp(-kI * (omega0 * t));
        qt->bands.setZero();
        qt->accumulate(ph, ab);
        qt->accumulate(std::conj(ph), adb);
        band_mul_left(*qt, rho, *t1);
        band_mul_right(rho, *qt, *t2);
        const Complex g(c.kappa, 0.0);
        band_mul_left_acc(-g, *qt, *t1, out);
        band_mul_right_acc(2.0 * g, *t1, *qt, out);
        band_mul_right_acc(-g, *t2, *qt, out);
    };
}

MasterRhs hamiltonian_rhs(std::function<Mat(double)> h, const UnitSystem& units) {
    const double hbar = units.hbar;
    return [h, hbar](double t, const Mat& rho, Mat& out) {
        const Mat ht = h(t);
        out = (-kI / hbar) * (ht * rho - rho * ht);
    };
}

TrajectoryPoint observe_state(double t, const Mat& rho, const Mat& target,
                              double basis_omega, const UnitSystem& units) {
    TrajectoryPoint pt;
    pt.t = t;
    const Mat herm = 0.5 * (rho + rho.adjoint());
    pt.fidelity_to_target = fidelity(herm, target);
    pt.entropy = von_neumann_entropy(herm);
    auto [x, p] = quadratures(static_cast<int>(rho.rows()), basis_omega, units);
    const double ex = expectation(herm, x);
    const double ep = expectation(herm, p);
    pt.var_x = expectation(herm, x * x) - ex * ex;
    pt.var_p = expectation(herm, p * p) - ep * ep;
    pt.cov_xp = 0.5 * expectation(herm, x * p + p * x) - ex * ep;
    pt.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
    return pt;
}

}  // namespace sqz
