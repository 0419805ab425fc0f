#include "sqz/trap.hpp"

#include <cmath>

#include "sqz/fock.hpp"

namespace sqz {

TrapProtocol TrapProtocol::closed(double omega_0, double omega_f, double eps0,
                                  double tf, const UnitSystem& units) {
    if (!(omega_0 > 0.0) || !(omega_f > 0.0))
        throw InvalidFrequencyError("trap frequencies must be positive");
    if (!(eps0 > 0.0))
        throw UnsupportedTemperatureError("thermal exponent must be positive");
    TrapProtocol p;
    p.omega_ = SmoothRamp::between(omega_0, omega_f, tf);
    p.eps0_ = eps0;
    p.isentropic_ = true;
    p.tf_ = tf;
    p.units_ = units;
    return p;
}

TrapProtocol TrapProtocol::open(double omega_0, double omega_f, double beta_0,
                                double beta_f, double tf,
                                const UnitSystem& units) {
    if (!(omega_0 > 0.0) || !(omega_f > 0.0))
        throw InvalidFrequencyError("trap frequencies must be positive");
    if (!(beta_0 > 0.0) || !(beta_f > 0.0))
        throw UnsupportedTemperatureError(
            "inverse temperatures must be positive");
    TrapProtocol p;
    p.omega_ = SmoothRamp::between(omega_0, omega_f, tf);
    p.beta_ = SmoothRamp::between(beta_0, beta_f, tf);
    p.eps0_ = units.hbar * omega_0 * beta_0;
    p.isentropic_ = false;
    p.tf_ = tf;
    p.units_ = units;
    return p;
}

double TrapProtocol::eps(double t) const {
    if (isentropic_) return eps0_;
    return units_.hbar * omega_.value(t) * beta_.value(t);
}

double TrapProtocol::eps_dot(double t) const {
    if (isentropic_) return 0.0;
    return units_.hbar *
           (omega_.deriv(t) * beta_.value(t) + omega_.value(t) * beta_.deriv(t));
}

double TrapProtocol::eps_ddot(double t) const {
    if (isentropic_) return 0.0;
    return units_.hbar *
           (omega_.second(t) * beta_.value(t) +
            2.0 * omega_.deriv(t) * beta_.deriv(t) +
            omega_.value(t) * beta_.second(t));
}

double TrapProtocol::r(double t) const {
    return 0.5 * std::log(omega_.value(t) / omega_.a);
}

double TrapProtocol::r_dot(double t) const {
    return omega_.deriv(t) / (2.0 * omega_.value(t));
}

SqueezedThermalParams TrapProtocol::target_params(double t) const {
    return SqueezedThermalParams::make(r(t), 0.0, eps(t));
}

TrapControls TrapProtocol::controls(double t) const {
    TrapControls c;
    c.t = t;
    const double w = omega_.value(t);
    const double wd = omega_.deriv(t);
    const double wdd = omega_.second(t);
    c.omega = w;
    c.Omega0 = -wd / (2.0 * w);
    const double Omega0_dot = -(wdd * w - wd * wd) / (2.0 * w * w);

    const double e = eps(t);
    const double ed = eps_dot(t);
    const double edd = eps_ddot(t);
    const double sh = std::sinh(e), ch = std::cosh(e);
    c.Omega1 = -ed / (2.0 * sh);
    const double Omega1_dot = -(edd * sh - ed * ed * ch) / (2.0 * sh * sh);

    const double Om = c.Omega0 + c.Omega1;
    c.omega_c_sq = w * w - Om * Om - Omega0_dot - Omega1_dot;

    const double shh = std::sinh(0.5 * e);
    c.gamma = -(units_.mass * w / units_.hbar) * ed / (4.0 * shh * shh);
    return c;
}

double TrapProtocol::ermakov_residual(double t) const {
    const double w = omega_.value(t);
    const double wd = omega_.deriv(t);
    const double wdd = omega_.second(t);
    const double w0 = omega_.a;
    const double sw0 = std::sqrt(w0);
    const double we = sw0 / std::sqrt(w);
    const double we_dd =
        sw0 * (0.75 * std::pow(w, -2.5) * wd * wd -
               0.5 * std::pow(w, -1.5) * wdd);
    const double wc2 = controls(t).omega_c_sq;
    return std::abs(we_dd + wc2 * we - w0 * w0 / (we * we * we));
}

TrapDesignReport TrapProtocol::scan(int grid_points) const {
    if (grid_points < 2) throw InvalidScheduleError("scan needs >= 2 points");
    TrapDesignReport rep;
    for (int k = 0; k <= grid_points; ++k) {
        const TrapControls c = controls(tf_ * double(k) / grid_points);
        if (k == 0 || c.omega_c_sq < rep.min_omega_c_sq)
            rep.min_omega_c_sq = c.omega_c_sq;
        rep.max_abs_gamma = std::max(rep.max_abs_gamma, std::abs(c.gamma));
        if (c.omega_c_sq < 0.0) rep.inverted_trap_segment = true;
        if (c.gamma < 0.0) rep.non_lindblad_segment = true;
    }
    return rep;
}

Mat quadratic_hamiltonian(double omega_c_sq, int dim, double basis_omega,
                          const UnitSystem& units) {
    auto [x, p] = quadratures(dim, basis_omega, units);
    return (p * p) / (2.0 * units.mass) +
           (0.5 * units.mass * omega_c_sq) * (x * x);
}

Mat cd_hamiltonian(double r, double phi, double r_dot, double phi_dot, int dim,
                   const UnitSystem& units) {
    const Mat a = ladder(dim);
    const Mat a2 = a * a;
    Mat h = (units.hbar * 0.5 * phi_dot) *
            (squeeze_dressed_number(r, phi, dim) - number_operator(dim));
    h += (kI * units.hbar * 0.5 * r_dot) *
         (std::exp(-kI * phi) * a2 - std::exp(kI * phi) * Mat(a2.adjoint()));
    return h;
}

Mat position_quadratic_unitary(double Omega, int dim, double basis_omega,
                               const UnitSystem& units) {
    auto [x, p] = quadratures(dim, basis_omega, units);
    (void)p;
    return matrix_exponential(
        (kI * units.mass * Omega / (2.0 * units.hbar)) * (x * x));
}

Mat position_dephasing(double gamma, const Mat& rho, double basis_omega,
                       const UnitSystem& units) {
    auto [x, p] = quadratures(static_cast<int>(rho.rows()), basis_omega, units);
    (void)p;
    const Mat xr = x * rho;
    const Mat rx = rho * x;
    // [x,[x,rho]] = x^2 rho - 2 x rho x + rho x^2
    return -gamma * (x * xr - x * rx - xr * x + rx * x);
}

Mat control_dissipator_b_form(const TrapProtocol& pr, double t,
                              const Mat& rho) {
    const int dim = static_cast<int>(rho.rows());
    const TrapControls c = pr.controls(t);
    const double rt = pr.r(t);
    const double e = pr.eps(t);
    const double ed = pr.eps_dot(t);
    const Mat a = ladder(dim);
    const Mat at = std::cosh(rt) * a + std::sinh(rt) * Mat(a.adjoint());
    const Mat q = at + Mat(at.adjoint());
    const double Om = c.Omega0 + c.Omega1;
    const Mat b = at - (kI * Om / (2.0 * c.omega)) * q;
    const Mat bd = b.adjoint();
    const Mat gen = b * b - bd * bd;
    return (0.5 * c.Omega1) * (gen * rho - rho * gen) -
           ed * (rho * (bd * b) + rho / (1.0 - std::exp(e)));
}

}  // namespace sqz
