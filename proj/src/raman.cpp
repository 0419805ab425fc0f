#include "sqz/raman.hpp"

#include <cmath>

namespace sqz {

FlowVelocity flow_velocity(const FlowState& s, const RamanControls& c) {
    const double eb = std::exp(-s.B);
    const double e2b = eb * eb;
    const Complex j2 = s.J * s.J;
    const double ar = c.alpha.real(), ai = c.alpha.imag();
    FlowVelocity v;
    v.J_dot = -4.0 * (1.0 - eb) * s.J * c.kappa +
              kI * (1.0 - e2b + 4.0 * j2) * ar + (e2b - 1.0 + 4.0 * j2) * ai;
    v.B_dot = -4.0 * ((std::cosh(s.B) - 1.0 + 2.0 * std::norm(s.J) / eb) *
                          c.kappa -
                      2.0 * s.J.imag() * ar + 2.0 * s.J.real() * ai);
    return v;
}

FlowVelocity jc_flow_velocity(const FlowState& s, const RamanControls& c) {
    const double eb = std::exp(-s.B);
    const double e2b = eb * eb;
    const Complex j2 = s.J * s.J;
    const double ar = c.alpha.real(), ai = c.alpha.imag();
    const Complex one_2j = 1.0 + 2.0 * s.J;
    FlowVelocity v;
    v.J_dot = 0.25 * eb * one_2j * c.kappa + kI * (1.0 - e2b + 4.0 * j2) * ar +
              (e2b - 1.0 + 4.0 * j2) * ai;
    v.B_dot = -0.25 * (eb + std::norm(one_2j) / eb) * c.kappa +
              8.0 * s.J.imag() * ar - 8.0 * s.J.real() * ai;
    return v;
}

Eigen::Matrix3d transfer_matrix(const FlowState& s) {
    const double jr = s.J.real(), ji = s.J.imag();
    const double eb = std::exp(-s.B);
    const double e2b = eb * eb;
    Eigen::Matrix3d m;
    m(0, 0) = 4.0 * (eb - 1.0) * jr;
    m(0, 1) = -8.0 * ji * jr;
    m(0, 2) = 4.0 * (jr * jr - ji * ji) + e2b - 1.0;
    m(1, 0) = 4.0 * (eb - 1.0) * ji;
    m(1, 1) = 4.0 * (jr * jr - ji * ji) + 1.0 - e2b;
    m(1, 2) = 8.0 * jr * ji;
    m(2, 0) = -4.0 * (std::cosh(s.B) - 1.0 + 2.0 * (jr * jr + ji * ji) / eb);
    m(2, 1) = 8.0 * ji;
    m(2, 2) = -8.0 * jr;
    return m;
}

Eigen::Matrix3d jc_transfer_matrix(const FlowState& s) {
    const double jr = s.J.real(), ji = s.J.imag();
    const double eb = std::exp(-s.B);
    Eigen::Matrix3d m = transfer_matrix(s);
    m(0, 0) = 0.25 * eb * (1.0 + 2.0 * jr);
    m(1, 0) = 0.5 * eb * ji;
    m(2, 0) = -(0.5 * std::cosh(s.B) + (jr * jr + ji * ji + jr) / eb);
    return m;
}

RamanClosedProtocol RamanClosedProtocol::design(double r_i, double r_f,
                                                double omega0, double tf) {
    if (!(omega0 > 0.0))
        throw InvalidFrequencyError("oscillator frequency must be positive");
    RamanClosedProtocol p;
    p.r = SmoothRamp::between(r_i, r_f, tf);
    p.omega0 = omega0;
    p.tf = tf;
    return p;
}

double closed_phase_time(double phi_f, double omega0) {
    if (!(omega0 > 0.0))
        throw InvalidFrequencyError("oscillator frequency must be positive");
    double span = -wrap_angle(phi_f);
    if (span <= 0.0) span += 2.0 * kPi;
    return span / (2.0 * omega0);
}

double laser_phase_difference(const RamanClosedProtocol& p, int grid_points) {
    if (grid_points < 2)
        throw InvalidScheduleError("phase scan needs >= 2 points");
    bool up = false, down = false;
    for (int k = 0; k <= grid_points; ++k) {
        const double rd = p.r.deriv(p.tf * double(k) / grid_points);
        if (rd > 1e-15) up = true;
        if (rd < -1e-15) down = true;
    }
    if (up && down)
        throw SignSplitError(
            "squeezing rate changes sign; a fixed laser phase difference "
            "cannot drive this ramp");
    return down ? -0.5 * kPi : 0.5 * kPi;
}

namespace {

void check_on_sheet(const FlowState& s, double t) {
    const bool finite = std::isfinite(s.B) && std::isfinite(s.J.real()) &&
                        std::isfinite(s.J.imag());
    if (!finite || !(s.B > 0.0) ||
        !(2.0 * std::abs(s.J) < 1.0 - std::exp(-s.B)))
        throw FlowDomainError("flow left the physical sheet", t);
}

}  // namespace

RamanOpenProtocol RamanOpenProtocol::design(const SqueezedThermalParams& initial,
                                            const SqueezedThermalParams& target,
                                            double tf, RamanScheme scheme,
                                            int grid_points) {
    if (grid_points < 1000)
        throw InvalidScheduleError("design grid needs at least 1000 points");
    const FactorizedForm fi = factorize(initial);
    const FactorizedForm ff = factorize(target);
    RamanOpenProtocol p;
    p.jr_ = SmoothRamp::between(fi.J.real(), ff.J.real(), tf);
    p.ji_ = SmoothRamp::between(fi.J.imag(), ff.J.imag(), tf);
    p.b_ = SmoothRamp::between(fi.B, ff.B, tf);
    p.tf_ = tf;
    p.scheme_ = scheme;
    for (int k = 0; k <= grid_points; ++k) {
        const double t = tf * double(k) / grid_points;
        const FlowState s = p.state(t);
        // The quintic interpolates between two on-sheet states but is not
        // guaranteed to stay on the sheet; reject the design if it strays.
        check_on_sheet(s, t);
        const Eigen::Matrix3d m =
            scheme == RamanScheme::two_laser ? transfer_matrix(s)
                                             : jc_transfer_matrix(s);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
        if (!lu.isInvertible())
            throw DesignInfeasibleError("control map is singular", t);
        const double cond = m.cwiseAbs().colwise().sum().maxCoeff() *
                            lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
        p.max_condition_ = std::max(p.max_condition_, cond);
        if (cond > 1e8)
            throw DesignInfeasibleError("control map is ill-conditioned", t);
        Eigen::Vector3d rhs;
        const FlowVelocity v = p.velocity(t);
        rhs << v.J_dot.real(), v.J_dot.imag(), v.B_dot;
        const Eigen::Vector3d u = lu.solve(rhs);
        if (u(0) < 0.0) {
            if (scheme == RamanScheme::four_laser)
                throw DesignInfeasibleError(
                    "four-laser dissipator cannot realize kappa < 0 "
                    "(cooling segment)",
                    t);
            p.non_lindblad_ = true;
        }
    }
    return p;
}

FlowState RamanOpenProtocol::state(double t) const {
    FlowState s;
    s.J = Complex(jr_.value(t), ji_.value(t));
    s.B = b_.value(t);
    return s;
}

FlowVelocity RamanOpenProtocol::velocity(double t) const {
    FlowVelocity v;
    v.J_dot = Complex(jr_.deriv(t), ji_.deriv(t));
    v.B_dot = b_.deriv(t);
    return v;
}

RamanControls RamanOpenProtocol::controls(double t) const {
    const FlowState s = state(t);
    const Eigen::Matrix3d m = scheme_ == RamanScheme::two_laser
                                  ? transfer_matrix(s)
                                  : jc_transfer_matrix(s);
    const FlowVelocity v = velocity(t);
    Eigen::Vector3d rhs;
    rhs << v.J_dot.real(), v.J_dot.imag(), v.B_dot;
    const Eigen::Vector3d u = Eigen::FullPivLU<Eigen::Matrix3d>(m).solve(rhs);
    RamanControls c;
    c.t = t;
    c.kappa = u(0);
    c.alpha = Complex(u(1), u(2));
    return c;
}

FlowState forward_parameter_flow(
    const std::function<RamanControls(double)>& controls, FlowState start,
    const TimeGrid& grid, RamanScheme scheme) {
    auto deriv = scheme == RamanScheme::two_laser ? flow_velocity
                                                  : jc_flow_velocity;
    check_on_sheet(start, 0.0);
    FlowState s = start;
    const double dt = grid.dt();
    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.t(k);
        const RamanControls c0 = controls(t);
        const RamanControls ch = controls(t + 0.5 * dt);
        const RamanControls c1 = controls(t + dt);
        const FlowVelocity k1 = deriv(s, c0);
        FlowState s2{s.J + 0.5 * dt * k1.J_dot, s.B + 0.5 * dt * k1.B_dot};
        const FlowVelocity k2 = deriv(s2, ch);
        FlowState s3{s.J + 0.5 * dt * k2.J_dot, s.B + 0.5 * dt * k2.B_dot};
        const FlowVelocity k3 = deriv(s3, ch);
        FlowState s4{s.J + dt * k3.J_dot, s.B + dt * k3.B_dot};
        const FlowVelocity k4 = deriv(s4, c1);
        s.J += dt / 6.0 *
               (k1.J_dot + 2.0 * k2.J_dot + 2.0 * k3.J_dot + k4.J_dot);
        s.B += dt / 6.0 *
               (k1.B_dot + 2.0 * k2.B_dot + 2.0 * k3.B_dot + k4.B_dot);
        check_on_sheet(s, t + dt);
    }
    return s;
}

Complex alpha_from_lasers(const RamanLaserConfig& c, double omega0,
                          bool* hierarchy_warning) {
    if (!(c.Delta > 0.0)) throw InvalidFrequencyError("detuning must be positive");
    if (!(c.Omega1 > 0.0) || !(c.Omega2 > 0.0))
        throw InvalidFrequencyError("Rabi frequencies must be positive");
    const double fastest = std::max({c.Omega1, c.Omega2, omega0});
    if (c.Delta < 10.0 * fastest)
        throw UnsupportedRegimeError(
            "adiabatic elimination needs Delta >= 10 max(Omega1, Omega2, "
            "omega0)");
    if (hierarchy_warning) *hierarchy_warning = c.Delta < 50.0 * fastest;
    const double d = c.eta2 - c.eta1;
    return d * d * c.Omega1 * c.Omega2 / (4.0 * c.Delta) *
           std::exp(kI * (c.Phi1 - c.Phi2));
}

double rabi_product_for_alpha(double abs_alpha, double Delta, double eta1,
                              double eta2) {
    if (!(Delta > 0.0)) throw InvalidFrequencyError("detuning must be positive");
    const double d = eta2 - eta1;
    if (std::abs(d) < 1e-12)
        throw DegenerateParameterError(
            "equal Lamb-Dicke parameters cannot drive the two-photon term");
    return 4.0 * Delta * abs_alpha / (d * d);
}

Complex jc_alpha_from_lasers(const JcLaserConfig& c) {
    if (!(c.detuning > 0.0))
        throw InvalidFrequencyError("detuning must be positive");
    const double d = c.lamb_dicke[2] - c.lamb_dicke[3];
    return -c.rabi[2] * c.rabi[3] * d * d / (4.0 * c.detuning) *
           std::exp(kI * (c.phase[2] - c.phase[3]));
}

double jc_kappa_from_lasers(const JcLaserConfig& c, const UnitSystem& units) {
    if (!(c.detuning > 0.0))
        throw InvalidFrequencyError("detuning must be positive");
    if (!(c.rabi[0] >= 0.0))
        throw InvalidFrequencyError("pump Rabi frequency must be nonnegative");
    if (std::abs(wrap_angle(c.phase[1] - c.phase[0] - 0.5 * kPi)) > 1e-9)
        throw WrongBranchError(
            "dissipator laser pair must be in quadrature, Phi1 - Phi0 = pi/2");
    const double amp = units.hbar * c.rabi[1] * std::sqrt(c.rabi[0]) *
                       (c.lamb_dicke[1] - c.lamb_dicke[0]) /
                       (2.0 * c.detuning);
    return amp * amp;
}

double jc_rabi_product_for_alpha(double abs_alpha, double detuning,
                                 double eta2, double eta3) {
    return rabi_product_for_alpha(abs_alpha, detuning, eta3, eta2);
}

double jc_pump_product_for_kappa(double kappa, double detuning, double eta0,
                                 double eta1, const UnitSystem& units) {
    if (!(kappa >= 0.0))
        throw DesignInfeasibleError(
            "four-laser dissipator cannot realize kappa < 0", 0.0);
    const double d = eta1 - eta0;
    if (std::abs(d) < 1e-12)
        throw DegenerateParameterError(
            "equal Lamb-Dicke parameters cannot drive the dissipator");
    const double scale = 2.0 * detuning / (units.hbar * d);
    return kappa * scale * scale;
}

}  // namespace sqz
