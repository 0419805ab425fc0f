#ifndef SQZ_FOCK_HPP
#define SQZ_FOCK_HPP

#include <utility>

#include "sqz/errors.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Health report of a numerically evolved density matrix. Tolerances follow
/// the library-wide contract: trace within 1e-9, Hermiticity within 1e-10,
/// eigenvalues above -1e-8, top-5-level tail mass below 1e-8.
struct StateReport {
    double trace_error = 0.0;      // |Tr rho - 1|
    double herm_error = 0.0;       // max |rho - rho^dag|
    double min_eigenvalue = 0.0;
    double tail_mass = 0.0;        // population of the top 5 levels
    bool tail_flag = false;
    bool valid = false;
};

/// Dense density matrix in the number basis of a reference oscillator.
struct DensityMatrix {
    Mat m;

    int dim() const { return static_cast<int>(m.rows()); }
    StateReport validate() const;
};

// --- operator builders -----------------------------------------------------

/// Annihilation operator on an N-level ladder: a[n-1,n] = sqrt(n).
Mat ladder(int dim);

Mat number_operator(int dim);

/// Position and momentum for an oscillator at frequency omega:
/// x = x_zpf (a + a^dag), p = i p_zpf (a^dag - a), so [x, p] = i hbar.
std::pair<Mat, Mat> quadratures(int dim, double omega, const UnitSystem& units);

/// S = exp((r/2)(e^{-i phi} a^2 - e^{i phi} a^dag^2)). The sign convention
/// fixes S a S^dag = cosh(r) a + e^{i phi} sinh(r) a^dag.
Mat squeeze_operator(double r, double phi, int dim);

/// Thermal state with Boltzmann weights p_n = e^{-eps n}(1 - e^{-eps}),
/// renormalized on the truncated ladder. The discarded tail e^{-eps N} must
/// be below 1e-8 or the returned state carries the tail flag.
DensityMatrix thermal_state(double eps, int dim);

double thermal_nbar(double eps);
double thermal_entropy(double eps);
/// Inverse of thermal_entropy on eps in [1e-6, 60].
double thermal_epsilon_from_entropy(double entropy);

// --- scalar functionals ----------------------------------------------------

/// Von Neumann entropy via selfadjoint eigendecomposition; eigenvalues are
/// floored at 1e-14 before the log. Raises InvalidStateError when the state
/// is non-positive beyond tolerance.
double von_neumann_entropy(const Mat& rho);

double purity(const Mat& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Mat& rho, const Mat& sigma);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const Mat& rho, const Mat& sigma);

double expectation(const Mat& rho, const Mat& op);

// --- numerics helpers -------------------------------------------------------

/// Scaling-and-squaring Pade exponential (relative accuracy ~1e-12).
Mat matrix_exponential(const Mat& g);

/// Principal square root of a positive semidefinite Hermitian matrix;
/// negative round-off eigenvalues are clamped to zero.
Mat sqrtm_psd(const Mat& rho);

/// Drop `margin` rows and columns at the truncation edge. Operator-identity
/// tests compare interior blocks because ladder truncation corrupts only
/// the boundary.
Mat interior_block(const Mat& full, int margin = 5);

// --- two-level x Fock ------------------------------------------------------

/// Tensor ordering {|g>, |e>} (x) Fock: index = s*dim + n with s=0 for |g>.
/// sigma_z = |e><e| - |g><g|.
struct TwoLevelFock {
    int fock_dim;

    int total_dim() const { return 2 * fock_dim; }
    Mat sigma_z() const;
    Mat project_g() const;
    Mat project_e() const;
    /// |g><e| (x) op, the lowering part of a drive term.
    Mat ge_block(const Mat& op) const;
    /// Lift a motional operator to identity (x) op.
    Mat lift(const Mat& op) const;
    /// Partial trace over the two-level factor.
    Mat reduce_motional(const Mat& rho_full) const;
    double excited_population(const Mat& rho_full) const;
};

}  // namespace sqz

#endif
