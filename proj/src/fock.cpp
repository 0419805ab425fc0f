#include "sqz/fock.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace sqz {

StateReport DensityMatrix::validate() const {
    StateReport rep;
    const int n = dim();
    rep.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
    rep.herm_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()),
                                          Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.tail_mass = 0.0;
    for (int k = std::max(0, n - 5); k < n; ++k)
        rep.tail_mass += std::abs(m(k, k));
    rep.tail_flag = rep.tail_mass > 1e-8;
    rep.valid = rep.trace_error <= 1e-9 && rep.herm_error <= 1e-10 &&
                rep.min_eigenvalue >= -1e-8 && !rep.tail_flag;
    return rep;
}

Mat ladder(int dim) {
    if (dim < 2) throw InvalidDimensionError("ladder needs dim >= 2");
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Mat number_operator(int dim) {
    Mat n = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = double(k);
    return n;
}

std::pair<Mat, Mat> quadratures(int dim, double omega, const UnitSystem& units) {
    if (omega <= 0.0) throw InvalidFrequencyError("omega must be positive");
    const Mat a = ladder(dim);
    const Mat ad = a.adjoint();
    Mat x = x_zpf(omega, units) * (a + ad);
    Mat p = kI * p_zpf(omega, units) * (ad - a);
    return {std::move(x), std::move(p)};
}

Mat squeeze_operator(double r, double phi, int dim) {
    const Mat a = ladder(dim);
    const Mat a2 = a * a;
    Mat g = 0.5 * r *
            (std::exp(-kI * phi) * a2 - std::exp(kI * phi) * a2.adjoint());
    return matrix_exponential(g);
}

DensityMatrix thermal_state(double eps, int dim) {
    if (eps <= 0.0)
        throw UnsupportedTemperatureError("thermal_state needs eps > 0");
    if (dim < 2) throw InvalidDimensionError("thermal_state needs dim >= 2");
    DensityMatrix rho;
    rho.m = Mat::Zero(dim, dim);
    // Renormalize the geometric weights on the truncated ladder so the state
    // has unit trace exactly; the discarded tail is e^{-eps*dim}.
    const double z = (1.0 - std::exp(-eps)) / (1.0 - std::exp(-eps * dim));
    for (int n = 0; n < dim; ++n) rho.m(n, n) = z * std::exp(-eps * n);
    return rho;
}

double thermal_nbar(double eps) {
    if (eps <= 0.0)
        throw UnsupportedTemperatureError("thermal_nbar needs eps > 0");
    return 1.0 / std::expm1(eps);
}

double thermal_entropy(double eps) {
    if (eps <= 0.0)
        throw UnsupportedTemperatureError("thermal_entropy needs eps > 0");
    // S = eps/(e^eps - 1) - ln(1 - e^{-eps}), monotone decreasing in eps.
    return eps / std::expm1(eps) - std::log1p(-std::exp(-eps));
}

double thermal_epsilon_from_entropy(double entropy) {
    double lo = 1e-6, hi = 60.0;
    if (entropy > thermal_entropy(lo) || entropy < thermal_entropy(hi))
        throw OutOfDomainError("entropy outside invertible range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (thermal_entropy(mid) > entropy)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double von_neumann_entropy(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()),
                                          Eigen::EigenvaluesOnly);
    const RealVec ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-8)
        throw InvalidStateError("entropy of a non-positive matrix");
    double s = 0.0;
    for (int k = 0; k < ev.size(); ++k) {
        const double lam = std::max(ev(k), 1e-14);
        s -= lam * std::log(lam);
    }
    return s;
}

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

double fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows())
        throw DimensionMismatchError("fidelity on mismatched dimensions");
    const Mat sr = sqrtm_psd(rho);
    Eigen::SelfAdjointEigenSolver<Mat> es(sr * sigma * sr,
                                          Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        f += std::sqrt(std::max(es.eigenvalues()(k), 0.0));
    return f * f;
}

double trace_distance(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows())
        throw DimensionMismatchError("trace_distance on mismatched dimensions");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho - sigma, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double expectation(const Mat& rho, const Mat& op) {
    return (rho * op).trace().real();
}

Mat matrix_exponential(const Mat& g) { return g.exp(); }

Mat sqrtm_psd(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
    RealVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() *
           es.eigenvectors().adjoint();
}

Mat interior_block(const Mat& full, int margin) {
    const int n = static_cast<int>(full.rows()) - 2 * margin;
    if (n < 1) throw InvalidDimensionError("interior_block margin too large");
    return full.block(margin, margin, n, n);
}

Mat TwoLevelFock::sigma_z() const {
    const int n = fock_dim;
    Mat sz = Mat::Zero(2 * n, 2 * n);
    sz.topLeftCorner(n, n) = -Mat::Identity(n, n);
    sz.bottomRightCorner(n, n) = Mat::Identity(n, n);
    return sz;
}

Mat TwoLevelFock::project_g() const {
    const int n = fock_dim;
    Mat pg = Mat::Zero(2 * n, 2 * n);
    pg.topLeftCorner(n, n) = Mat::Identity(n, n);
    return pg;
}

Mat TwoLevelFock::project_e() const {
    const int n = fock_dim;
    Mat pe = Mat::Zero(2 * n, 2 * n);
    pe.bottomRightCorner(n, n) = Mat::Identity(n, n);
    return pe;
}

Mat TwoLevelFock::ge_block(const Mat& op) const {
    const int n = fock_dim;
    if (op.rows() != n) throw DimensionMismatchError("ge_block dimension");
    Mat out = Mat::Zero(2 * n, 2 * n);
    out.topRightCorner(n, n) = op;
    return out;
}

Mat TwoLevelFock::lift(const Mat& op) const {
    const int n = fock_dim;
    if (op.rows() != n) throw DimensionMismatchError("lift dimension");
    Mat out = Mat::Zero(2 * n, 2 * n);
    out.topLeftCorner(n, n) = op;
    out.bottomRightCorner(n, n) = op;
    return out;
}

Mat TwoLevelFock::reduce_motional(const Mat& rho_full) const {
    const int n = fock_dim;
    if (rho_full.rows() != 2 * n)
        throw DimensionMismatchError("reduce_motional dimension");
    return rho_full.topLeftCorner(n, n) + rho_full.bottomRightCorner(n, n);
}

double TwoLevelFock::excited_population(const Mat& rho_full) const {
    const int n = fock_dim;
    return rho_full.bottomRightCorner(n, n).trace().real();
}

}  // namespace sqz
