#ifndef SQZ_SQUEEZED_STATE_HPP
#define SQZ_SQUEEZED_STATE_HPP

#include "sqz/fock.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Target family: sigma = S(r, phi) e^{-eps n} S(r, phi)^dag / Z with
/// Z = 1/(1 - e^{-eps}). eps > 0 is the thermal exponent, nbar = 1/(e^eps-1).
struct SqueezedThermalParams {
    double r = 0.0;
    double phi = 0.0;
    double eps = 1.0;

    /// Canonical constructor: folds r < 0 into (|r|, phi + pi), wraps phi
    /// into (-pi, pi], rejects eps <= 0.
    static SqueezedThermalParams make(double r, double phi, double eps);

    double nbar() const;
    double entropy() const;  // thermal entropy, invariant under the squeeze
    double lambda() const { return -eps; }
};

/// Normally ordered factorization of the same density matrix,
///   sigma = (1 - e^{-eps}) K exp(conj(J) a^dag^2) exp(-B n) exp(J a^2),
/// with closed forms
///   D = cosh^2 r - sinh^2 r e^{-2 eps},
///   J = e^{-i phi} sinh(2r)(e^{-2 eps} - 1)/(4D),  |J| < 1/2,
///   B = eps + ln D,  K = D^{-1/2}.
struct FactorizedForm {
    double K = 1.0;
    Complex J = Complex(0.0, 0.0);
    double B = 1.0;
};

FactorizedForm factorize(const SqueezedThermalParams& p);

/// Inverse of factorize. phi = pi - arg(J) wrapped; (r, eps) in closed form
/// from the reciprocal-root quadratic for e^{-eps}. Throws WrongBranchError
/// when (J, B) lies outside the physical sheet, which needs B > 0 and
/// 2|J| < 1 - e^{-B}.
SqueezedThermalParams unfactorize(const FactorizedForm& f);

/// Squeeze-dressed number operator S n S^dag =
/// cosh(2r) n + (1/2) sinh(2r)(e^{i phi} a^dag^2 + e^{-i phi} a^2) + sinh^2 r.
Mat squeeze_dressed_number(double r, double phi, int dim);

/// sigma on a dim-level ladder via dense exponentials S rho_th S^dag.
/// Accurate only when the occupation tail fits well inside dim.
DensityMatrix squeezed_thermal_dense(const SqueezedThermalParams& p, int dim);

/// sigma via the factored triple product. The raising factor is lower
/// triangular and the lowering factor upper triangular, so the truncated
/// product reproduces the top-left block of the infinite-ladder operator
/// exactly; only the overall trace normalization refers to the full ladder.
DensityMatrix squeezed_thermal_factored(const SqueezedThermalParams& p,
                                        int dim);

/// Top-left block x block corner of the exact infinite-ladder sigma,
/// converged by growing an internal eigendecomposition dimension until the
/// block stabilizes. n_used receives the final internal dimension.
Mat squeezed_thermal_block(const SqueezedThermalParams& p, int block,
                           int* n_used = nullptr);

/// Second moments of a zero-mean state: vx = <x^2>, vp = <p^2>,
/// c = <{x,p}>/2.
struct Covariance {
    double vx = 0.0;
    double vp = 0.0;
    double c = 0.0;

    double det() const { return vx * vp - c * c; }
};

/// Closed-form covariance of sigma for an oscillator at frequency omega:
///   vx = x0^2 nu (cosh 2r - sinh 2r cos phi),
///   vp = p0^2 nu (cosh 2r + sinh 2r cos phi),
///   c  = -(hbar/2) nu sinh 2r sin phi,      nu = 2 nbar + 1.
Covariance covariance_closed(const SqueezedThermalParams& p, double omega,
                             const UnitSystem& units);

/// Invert covariance_closed: nu from the symplectic determinant, then
/// (r, phi) from the anisotropy. Throws InvalidStateError if det V violates
/// the uncertainty bound.
SqueezedThermalParams params_from_covariance(const Covariance& v, double omega,
                                             const UnitSystem& units);

/// Brute-force covariance from a Fock-space density matrix.
Covariance covariance_from_state(const Mat& rho, double omega,
                                 const UnitSystem& units);

/// Position variance x0^2 (2 nbar + 1) e^{-2r} of the phi = 0 branch.
/// Throws WrongBranchError when |phi| > 1e-12: with correlations present
/// the single-number form does not apply, use covariance_closed instead.
double variance_x(const SqueezedThermalParams& p, double omega,
                  const UnitSystem& units);

/// Relative position-variance change, in dB, of an end-to-end protocol
/// that scales the trap frequency by omega_ratio and the inverse
/// temperature by beta_ratio starting from thermal exponent eps0:
///   10 log10[ tanh(eps0/2) / (omega_ratio tanh(eps0 omega_ratio beta_ratio / 2)) ].
double variance_ratio_db(double omega_ratio, double beta_ratio, double eps0);

}  // namespace sqz

#endif
