#ifndef SQZ_WIGNER_HPP
#define SQZ_WIGNER_HPP

#include <Eigen/Dense>

#include "sqz/squeezed_state.hpp"
#include "sqz/types.hpp"

namespace sqz {

RealVec linspace(double lo, double hi, int n);

/// Phase-space samples W(x_i, p_j) on a rectangular grid; w(i, j) pairs
/// xs[i] with ps[j].
struct WignerGrid {
    RealVec xs;
    RealVec ps;
    Eigen::MatrixXd w;

    /// Trapezoidal estimate of the total integral; 1 to 1e-4 for any grid
    /// wide and fine enough to hold the state.
    double norm_estimate() const;
};

/// Wigner function of a number-basis density matrix via the Laguerre ladder
/// expansion of the displaced-parity kernel, evaluated with stable
/// three-term recurrences. O(dim^2) per grid point; the parallel backend
/// splits over grid columns.
WignerGrid wigner_from_state(const Mat& rho, const RealVec& xs,
                             const RealVec& ps, double basis_omega,
                             const UnitSystem& units,
                             Backend backend = Backend::parallel);

/// Centered Gaussian Wigner function from a covariance triple,
/// W = exp(-(Vp x^2 - 2 C x p + Vx p^2) / (2 det)) / (2 pi sqrt(det)).
/// The fully independent route used to cross-check the Fock expansion.
WignerGrid wigner_gaussian(const Covariance& v, const RealVec& xs,
                           const RealVec& ps, const UnitSystem& units);

double max_abs_diff(const WignerGrid& a, const WignerGrid& b);

}  // namespace sqz

#endif
