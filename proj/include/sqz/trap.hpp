#ifndef SQZ_TRAP_HPP
#define SQZ_TRAP_HPP

#include "sqz/schedule.hpp"
#include "sqz/squeezed_state.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// One sample of the reverse-engineered trap controls.
struct TrapControls {
    double t = 0.0;
    double omega = 0.0;       // reference trajectory frequency
    double omega_c_sq = 0.0;  // lab control frequency squared
    double gamma = 0.0;       // position-dephasing rate
    double Omega0 = 0.0;      // -omega_dot / (2 omega)
    double Omega1 = 0.0;      // -eps_dot / (2 sinh eps)
};

/// Scan summary kept in protocol metadata. A transiently inverted trap
/// (omega_c_sq < 0) and a negative dephasing rate are both legitimate
/// designs, but the caller should know about them.
struct TrapDesignReport {
    bool inverted_trap_segment = false;
    bool non_lindblad_segment = false;
    double min_omega_c_sq = 0.0;
    double max_abs_gamma = 0.0;
};

/// Trap-frequency ramp driving sigma_t = S_{r_t,0} thermal(eps_t) S^dag with
/// r_t = ln sqrt(omega_t/omega_0). Frequency and inverse temperature ride the
/// quintic switch, and every derivative entering the controls is analytic, so
/// the boundary values are exact: omega_c(0) = omega_0, omega_c(tf) = omega_f,
/// gamma(0) = gamma(tf) = 0.
class TrapProtocol {
  public:
    /// Isentropic ramp: eps_t pinned to eps0, no dissipation needed.
    static TrapProtocol closed(double omega_0, double omega_f, double eps0,
                               double tf, const UnitSystem& units = {});

    /// Independent frequency and inverse-temperature endpoints. The thermal
    /// exponent eps_t = hbar omega_t beta_t varies, which turns on the
    /// dephasing control.
    static TrapProtocol open(double omega_0, double omega_f, double beta_0,
                             double beta_f, double tf,
                             const UnitSystem& units = {});

    double tf() const { return tf_; }
    double omega_0() const { return omega_.a; }
    double omega_f() const { return omega_.b; }
    bool isentropic() const { return isentropic_; }
    const UnitSystem& units() const { return units_; }

    double omega(double t) const { return omega_.value(t); }
    double omega_dot(double t) const { return omega_.deriv(t); }
    double omega_ddot(double t) const { return omega_.second(t); }

    double eps(double t) const;
    double eps_dot(double t) const;
    double eps_ddot(double t) const;

    double r(double t) const;      // ln sqrt(omega_t / omega_0)
    double r_dot(double t) const;  // omega_dot / (2 omega)

    /// Designed instantaneous state (phi = 0 branch).
    SqueezedThermalParams target_params(double t) const;

    TrapControls controls(double t) const;

    /// |w_dd + omega_c^2 w - omega_0^2 / w^3| for w = sqrt(omega_0/omega_t),
    /// all derivatives closed-form. Vanishes to round-off on isentropic
    /// ramps; the dissipative correction to omega_c breaks it elsewhere.
    double ermakov_residual(double t) const;

    TrapDesignReport scan(int grid_points = 1000) const;

  private:
    TrapProtocol() = default;

    SmoothRamp omega_;
    SmoothRamp beta_;  // unused when isentropic_
    double eps0_ = 0.0;
    bool isentropic_ = true;
    double tf_ = 0.0;
    UnitSystem units_;
};

/// H = p^2 / 2m + (1/2) m omega_c_sq x^2 on a ladder whose quadratures are
/// scaled at basis_omega. omega_c_sq may be negative.
Mat quadratic_hamiltonian(double omega_c_sq, int dim, double basis_omega,
                          const UnitSystem& units);

/// Counter-diabatic generator of the squeeze family,
///   H_cd = hbar (phi_dot/2) (S n S^dag - n)
///        + i hbar (r_dot/2) (e^{-i phi} a^2 - e^{i phi} a^dag^2).
Mat cd_hamiltonian(double r, double phi, double r_dot, double phi_dot, int dim,
                   const UnitSystem& units);

/// U = exp(i m Omega x^2 / (2 hbar)), the frame dressing that turns the
/// designed dynamics into a plain quadratic Hamiltonian. Identity at
/// Omega = 0, hence at both ends of any ramp.
Mat position_quadratic_unitary(double Omega, int dim, double basis_omega,
                               const UnitSystem& units);

/// -gamma [x, [x, rho]] with x scaled at basis_omega.
Mat position_dephasing(double gamma, const Mat& rho, double basis_omega,
                       const UnitSystem& units);

/// Control dissipator recast on the dressed mode b = U a_t U^dag:
///   D_c(rho) = (Omega1/2) [b^2 - b^dag^2, rho]
///            - eps_dot rho (b^dag b + 1/(1 - e^eps)).
/// Equals -gamma [x,[x,rho]] only when rho is the instantaneous designed lab
/// state; callers cross-validate the two on exactly that state.
Mat control_dissipator_b_form(const TrapProtocol& pr, double t, const Mat& rho);

}  // namespace sqz

#endif
