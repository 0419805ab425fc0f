#ifndef SQZ_RAMAN_HPP
#define SQZ_RAMAN_HPP

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "sqz/schedule.hpp"
#include "sqz/squeezed_state.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// One sample of the rotated-frame drive: two-photon amplitude alpha and
/// dephasing amplitude kappa = gamma x0^2.
struct RamanControls {
    double t = 0.0;
    Complex alpha = Complex(0.0, 0.0);
    double kappa = 0.0;
};

/// Factorized coordinates of the evolving state, sigma prop to
/// exp(conj(J) a^dag^2) exp(-B n) exp(J a^2).
struct FlowState {
    Complex J = Complex(0.0, 0.0);
    double B = 1.0;
};

struct FlowVelocity {
    Complex J_dot = Complex(0.0, 0.0);
    double B_dot = 0.0;
};

enum class RamanScheme { two_laser, four_laser };

/// Equations of motion of (J, B) under drive alpha and dephasing kappa,
///   J_dot = -4 e^{-B}(e^B - 1) J kappa + i(1 - e^{-2B} + 4J^2) alpha_R
///         + (e^{-2B} - 1 + 4J^2) alpha_I,
///   B_dot = -4 [ (cosh B - 1 + 2 e^B |J|^2) kappa
///              + i alpha_R (J - conj J) + alpha_I (J + conj J) ].
FlowVelocity flow_velocity(const FlowState& s, const RamanControls& c);

/// Four-laser variant: the dissipator couples through the ground-state
/// projector instead of the rotating position, which changes the kappa
/// column,
///   J_dot = (1/4) e^{-B}(1 + 2J) kappa + (same alpha terms),
///   B_dot = -(1/4)(e^{-B} + e^B(1 + 2J)(1 + 2 conj J)) kappa
///         + (same alpha terms).
FlowVelocity jc_flow_velocity(const FlowState& s, const RamanControls& c);

/// Linear map (kappa, alpha_R, alpha_I) -> (Re J_dot, Im J_dot, B_dot).
/// Row-for-row the same content as flow_velocity; kept as an explicit
/// matrix for the inverse design, and cross-checked against the velocity
/// form in tests.
Eigen::Matrix3d transfer_matrix(const FlowState& s);
Eigen::Matrix3d jc_transfer_matrix(const FlowState& s);

/// Pure squeezing drive in the lab frame: r rides the quintic, the drive is
/// alpha = i r_dot / 2 (laser phase difference +-pi/2 by the sign of r_dot),
/// and the lab squeezing phase advances as phi_t = -2 omega0 t.
struct RamanClosedProtocol {
    SmoothRamp r;
    double omega0 = 1.0;
    double tf = 1.0;

    static RamanClosedProtocol design(double r_i, double r_f, double omega0,
                                      double tf);

    Complex alpha(double t) const { return kI * (0.5 * r.deriv(t)); }
    double phi(double t) const { return wrap_angle(-2.0 * omega0 * t); }
};

/// Smallest positive process time whose closed protocol ends on the lab
/// phase phi_f, tf = (-phi_f mod 2 pi) / (2 omega0).
double closed_phase_time(double phi_f, double omega0);

/// Constant laser phase difference behind a closed ramp: +pi/2 while
/// r grows, -pi/2 while it shrinks. A ramp that needs both cannot be driven
/// by lasers at fixed relative phase and raises SignSplitError.
double laser_phase_difference(const RamanClosedProtocol& p,
                              int grid_points = 1000);

/// Reverse-engineered open protocol in the rotated frame: the factorized
/// coordinates (J_R, J_I, B) ride the quintic between the endpoint states
/// and the control triple (kappa, alpha_R, alpha_I) solves the 3x3 linear
/// map at each instant. design() scans a uniform grid and rejects the
/// protocol when the map becomes ill-conditioned (estimate above 1e8), or,
/// for the four-laser scheme, when it demands kappa < 0 (the scheme only
/// heats).
class RamanOpenProtocol {
  public:
    static RamanOpenProtocol design(const SqueezedThermalParams& initial,
                                    const SqueezedThermalParams& target,
                                    double tf,
                                    RamanScheme scheme = RamanScheme::two_laser,
                                    int grid_points = 1000);

    FlowState state(double t) const;
    FlowVelocity velocity(double t) const;
    RamanControls controls(double t) const;

    double tf() const { return tf_; }
    RamanScheme scheme() const { return scheme_; }
    double max_condition() const { return max_condition_; }
    /// Two-laser designs may call for kappa < 0 on cooling segments; the
    /// result is a legitimate non-Lindblad drive worth flagging.
    bool non_lindblad_segment() const { return non_lindblad_; }

  private:
    RamanOpenProtocol() = default;

    SmoothRamp jr_, ji_, b_;
    double tf_ = 1.0;
    RamanScheme scheme_ = RamanScheme::two_laser;
    double max_condition_ = 0.0;
    bool non_lindblad_ = false;
};

/// Fixed-step RK4 on the factorized-coordinate equations of motion; the
/// scheme picks the velocity form. Controls are sampled at the half steps.
/// Throws FlowDomainError naming the first time the trajectory leaves the
/// physical sheet (B > 0 and 2|J| < 1 - e^{-B}).
FlowState forward_parameter_flow(
    const std::function<RamanControls(double)>& controls, FlowState start,
    const TimeGrid& grid, RamanScheme scheme = RamanScheme::two_laser);

// --- laser geometry ---------------------------------------------------------

/// The two driving lasers behind the two-photon amplitude.
struct RamanLaserConfig {
    double Omega1 = 0.0, Omega2 = 0.0;  // Rabi frequencies
    double eta1 = 0.0, eta2 = 0.0;      // Lamb-Dicke parameters
    double Delta = 1.0;                 // common detuning
    double Phi1 = 0.0, Phi2 = 0.0;      // laser phases
};

/// alpha = (eta2 - eta1)^2 Omega1 Omega2 / (4 Delta) e^{i(Phi1 - Phi2)}.
/// Enforces the adiabatic-elimination hierarchy Delta >= 10 max(Omega1,
/// Omega2, omega0); below 50x the margin is thin and hierarchy_warning is
/// set when provided.
Complex alpha_from_lasers(const RamanLaserConfig& c, double omega0,
                          bool* hierarchy_warning = nullptr);

/// Invert for the Rabi-frequency product at fixed geometry:
/// Omega1 Omega2 = 4 Delta |alpha| / (eta2 - eta1)^2.
double rabi_product_for_alpha(double abs_alpha, double Delta, double eta1,
                              double eta2);

/// Four-laser drive: pair (2, 3) generates the squeezing Hamiltonian, pair
/// (1, 0) the engineered dissipator.
struct JcLaserConfig {
    std::array<double, 4> rabi{};        // Omega_0..Omega_3
    std::array<double, 4> lamb_dicke{};  // eta_0..eta_3
    double detuning = 1.0;               // common quarter-sum detuning
    std::array<double, 4> phase{};       // Phi_0..Phi_3
};

/// alpha = -Omega_2 Omega_3 (eta_2 - eta_3)^2 / (4 Delta) e^{i(Phi_2 - Phi_3)}.
Complex jc_alpha_from_lasers(const JcLaserConfig& c);

/// kappa = (hbar Omega_1 sqrt(Omega_0) (eta_1 - eta_0) / (2 Delta))^2; the
/// dissipator pair must be in quadrature, Phi_1 - Phi_0 = pi/2. Nonnegative
/// by construction, which is why four-laser cooling designs are rejected.
double jc_kappa_from_lasers(const JcLaserConfig& c, const UnitSystem& units);

double jc_rabi_product_for_alpha(double abs_alpha, double detuning,
                                 double eta2, double eta3);
/// Omega_1^2 Omega_0 = kappa (2 Delta / (hbar (eta_1 - eta_0)))^2.
double jc_pump_product_for_kappa(double kappa, double detuning, double eta0,
                                 double eta1, const UnitSystem& units);

}  // namespace sqz

#endif
