#ifndef SQZ_MASTER_HPP
#define SQZ_MASTER_HPP

#include <functional>

#include "sqz/banded.hpp"
#include "sqz/raman.hpp"
#include "sqz/trap.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// drho/dt at time t; out is preallocated and overwritten.
using MasterRhs = std::function<void(double t, const Mat& rho, Mat& out)>;

/// Called with step 0 on the initial state and after every step thereafter.
using StepObserver = std::function<void(int step, double t, const Mat& rho)>;

struct PropagateOptions {
    /// Divide by the trace after every step. Needed by linear flows that
    /// shed norm (the projected four-laser dissipator); harmless elsewhere.
    bool renormalize_trace = false;
    /// Replace rho by its Hermitian part each step; the discarded
    /// anti-Hermitian norm is reported through PropagateStats.
    bool hermitize = false;
    /// Abort with StepSizeError once |Tr rho - 1| exceeds this bound
    /// (0 disables; ignored under renormalize_trace, where the trace is
    /// managed, not conserved).
    double max_trace_drift = 0.0;
};

struct PropagateStats {
    double max_hermiticity_correction = 0.0;
    double max_trace_drift = 0.0;
};

/// Classic fixed-step RK4 over the grid.
Mat propagate(Mat rho, const TimeGrid& grid, const MasterRhs& rhs,
              const PropagateOptions& opt = {},
              const StepObserver& observer = nullptr,
              PropagateStats* stats = nullptr);

/// Guard for the explicit integrator: the fastest control rate must stay
/// well inside one step, dt * max_rate <= 0.01. Throws StepSizeError
/// carrying a compliant dt.
void require_step(double dt, double max_rate);

/// Fastest control rate of a trap ramp: max over the grid of
/// sqrt(|omega_c^2|), |Omega0 + Omega1| and |gamma| x0^2.
double trap_rate_scale(const TrapProtocol& pr, int grid_points = 2000);

/// Fastest control rate of a rotated-frame drive: max of |alpha| and |kappa|.
double raman_rate_scale(const std::function<RamanControls(double)>& controls,
                        double tf, int grid_points = 2000);

// --- right-hand sides -------------------------------------------------------
// Each factory carries both routes: Backend::serial_reference assembles plain
// dense Eigen expressions, Backend::parallel runs the banded kernels.

/// Lab-frame trap equation,
///   drho/dt = -(i/hbar) [p^2/2m + (1/2) m omega_c^2(t) x^2, rho]
///             - gamma(t) [x, [x, rho]],
/// with caller-supplied control curves (a designed protocol or an ingested
/// control table).
MasterRhs trap_coeff_rhs(std::function<double(double)> omega_c_sq,
                         std::function<double(double)> gamma,
                         double basis_omega, int dim, Backend backend,
                         const UnitSystem& units);

MasterRhs trap_rhs(const TrapProtocol& pr, int dim, Backend backend);

/// Rotated-frame drive with the dissipator of the chosen scheme.
/// two_laser:
///   drho/dt = -i [alpha a^2 + conj(alpha) a^dag^2, rho]
///             + 2 kappa (D(a) + D(a^dag));
/// four_laser:
///   drho/dt = -i [alpha a^2 + conj(alpha) a^dag^2, rho]
///             + (kappa/4) (a + a^dag) rho (a + a^dag),
/// the latter linear and norm-shedding (its physical scalar decay only
/// rescales the state), so propagate it with renormalize_trace.
MasterRhs raman_rhs(std::function<RamanControls(double)> controls, int dim,
                    RamanScheme scheme, Backend backend);

/// Pre-secular form of the two-laser dissipator with the rotating
/// quadrature q_t = a e^{-i omega0 t} + a^dag e^{i omega0 t}:
///   drho/dt = -i [alpha a^2 + conj(alpha) a^dag^2, rho]
///             - kappa [q_t, [q_t, rho]].
/// Kept to measure the secular-approximation discrepancy; never asserted
/// against the averaged form.
MasterRhs raman_prerwa_rhs(std::function<RamanControls(double)> controls,
                           double omega0, int dim, Backend backend);

/// Plain unitary evolution under a caller-supplied Hamiltonian.
MasterRhs hamiltonian_rhs(std::function<Mat(double)> h,
                          const UnitSystem& units);

// --- trajectory records -----------------------------------------------------

struct TrajectoryPoint {
    double t = 0.0;
    double fidelity_to_target = 0.0;
    double entropy = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double cov_xp = 0.0;
    double trace_error = 0.0;
};

/// Scalar observables of one snapshot, measured against a fixed target.
TrajectoryPoint observe_state(double t, const Mat& rho, const Mat& target,
                              double basis_omega, const UnitSystem& units);

}  // namespace sqz

#endif
