#include "sqz/squeezed_state.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sqz {

SqueezedThermalParams SqueezedThermalParams::make(double r, double phi,
                                                  double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw UnsupportedTemperatureError(
            "thermal exponent must be positive and finite");
    if (!std::isfinite(r) || !std::isfinite(phi))
        throw InvalidStateError("squeezing parameters must be finite");
    SqueezedThermalParams p;
    if (r < 0.0) {  // S(-r, phi) = S(r, phi + pi)
        r = -r;
        phi += kPi;
    }
    p.r = r;
    p.phi = wrap_angle(phi);
    p.eps = eps;
    return p;
}

double SqueezedThermalParams::nbar() const { return thermal_nbar(eps); }

double SqueezedThermalParams::entropy() const { return thermal_entropy(eps); }

FactorizedForm factorize(const SqueezedThermalParams& p) {
    if (!(p.eps > 0.0))
        throw UnsupportedRegimeError("factorize needs eps > 0");
    const double u = std::exp(-2.0 * p.eps);
    const double ch = std::cosh(p.r), sh = std::sinh(p.r);
    const double d = ch * ch - sh * sh * u;
    if (std::abs(d) < 1e-14)
        throw DegenerateParameterError("factorization prefactor underflow");
    FactorizedForm f;
    const double j = std::sinh(2.0 * p.r) * (u - 1.0) / (4.0 * d);
    f.J = j * std::exp(-kI * p.phi);
    f.B = p.eps + std::log(d);
    f.K = 1.0 / std::sqrt(d);
    return f;
}

SqueezedThermalParams unfactorize(const FactorizedForm& f) {
    const double jmag = std::abs(f.J);
    if (!(f.B > 0.0))
        throw WrongBranchError("unfactorize needs B > 0");
    if (!(2.0 * jmag < 1.0 - std::exp(-f.B)))
        throw WrongBranchError("(J, B) outside the physical sheet");
    SqueezedThermalParams p;
    if (jmag < 1e-14) {
        p.r = 0.0;
        p.phi = 0.0;
        p.eps = f.B;
        return p;
    }
    // Eliminating r from the closed forms leaves a quadratic for w = e^{-eps}:
    //   E w^2 - (E^2 + 1 - 4 j^2 E^2) w + E = 0,   E = e^B,
    // whose roots are reciprocal; the physical one lies in (e^{-B}, 1).
    const double e = std::exp(f.B);
    const double q = e * e + 1.0 - 4.0 * jmag * jmag * e * e;
    const double disc = q * q - 4.0 * e * e;
    if (!(disc > 0.0))
        throw WrongBranchError("(J, B) at the infinite-temperature edge");
    const double w = 2.0 * e / (q + std::sqrt(disc));
    // sinh(2r) = 4 |J| w E / (1 - w^2) >= 0, uniformly stable near r = 0.
    const double s2r = 4.0 * jmag * w * e / (1.0 - w * w);
    p.r = 0.5 * std::asinh(s2r);
    p.phi = wrap_angle(kPi - std::arg(f.J));
    p.eps = -std::log(w);
    return p;
}

Mat squeeze_dressed_number(double r, double phi, int dim) {
    const Mat a = ladder(dim);
    const Mat a2 = a * a;
    const double sh = std::sinh(r);
    Mat g = std::cosh(2.0 * r) * number_operator(dim);
    g += 0.5 * std::sinh(2.0 * r) *
         (std::exp(kI * phi) * Mat(a2.adjoint()) + std::exp(-kI * phi) * a2);
    g += sh * sh * Mat::Identity(dim, dim);
    return g;
}

DensityMatrix squeezed_thermal_dense(const SqueezedThermalParams& p, int dim) {
    const Mat s = squeeze_operator(p.r, p.phi, dim);
    DensityMatrix rho = thermal_state(p.eps, dim);
    rho.m = s * rho.m * s.adjoint();
    return rho;
}

namespace {

// exp(J a^2): column n holds J^k sqrt(n!/(n-2k)!)/k! at row n-2k. Upper
// triangular, and exact under truncation because a^2 only lowers.
Mat exp_lowering_quadratic(Complex j, int dim) {
    Mat u = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        Complex term(1.0, 0.0);
        u(n, n) = term;
        for (int k = 1; 2 * k <= n; ++k) {
            const double m = double(n - 2 * k);
            term *= j * std::sqrt((m + 2.0) * (m + 1.0)) / double(k);
            u(n - 2 * k, n) = term;
        }
    }
    return u;
}

}  // namespace

DensityMatrix squeezed_thermal_factored(const SqueezedThermalParams& p,
                                        int dim) {
    const FactorizedForm f = factorize(p);
    const Mat u = exp_lowering_quadratic(f.J, dim);
    Vec diag(dim);
    for (int n = 0; n < dim; ++n) diag(n) = std::exp(-f.B * n);
    DensityMatrix rho;
    const double norm = (1.0 - std::exp(-p.eps)) * f.K;
    rho.m = norm * (u.adjoint() * diag.asDiagonal() * u);
    return rho;
}

Mat squeezed_thermal_block(const SqueezedThermalParams& p, int block,
                           int* n_used) {
    if (block < 1) throw InvalidDimensionError("block must be positive");
    const double norm = 1.0 - std::exp(-p.eps);
    int n_int = std::max(2 * block, 96);
    Mat prev;
    for (int round = 0; round < 10; ++round) {
        Eigen::SelfAdjointEigenSolver<Mat> es(
            squeeze_dressed_number(p.r, p.phi, n_int));
        const Mat w = es.eigenvectors().topRows(block);
        RealVec boltz = (-p.eps * es.eigenvalues().array()).exp();
        Mat blk = norm * (w * boltz.asDiagonal() * w.adjoint());
        if (prev.size() > 0 && (blk - prev).cwiseAbs().maxCoeff() < 1e-12) {
            if (n_used) *n_used = n_int;
            return blk;
        }
        prev = std::move(blk);
        n_int += n_int / 2;
    }
    throw InternalConsistencyError(
        "squeezed_thermal_block did not converge; state too hot or too "
        "squeezed for the requested corner");
}

Covariance covariance_closed(const SqueezedThermalParams& p, double omega,
                             const UnitSystem& units) {
    const double nu = 2.0 * p.nbar() + 1.0;
    const double c2 = std::cosh(2.0 * p.r), s2 = std::sinh(2.0 * p.r);
    const double x0 = x_zpf(omega, units), p0 = p_zpf(omega, units);
    Covariance v;
    v.vx = x0 * x0 * nu * (c2 - s2 * std::cos(p.phi));
    v.vp = p0 * p0 * nu * (c2 + s2 * std::cos(p.phi));
    v.c = -0.5 * units.hbar * nu * s2 * std::sin(p.phi);
    return v;
}

SqueezedThermalParams params_from_covariance(const Covariance& v, double omega,
                                             const UnitSystem& units) {
    const double x0 = x_zpf(omega, units), p0 = p_zpf(omega, units);
    const double a = v.vx / (x0 * x0);
    const double b = v.vp / (p0 * p0);
    const double cs = v.c / (0.5 * units.hbar);
    const double det = a * b - cs * cs;
    if (!(det > 1.0 - 1e-9))
        throw InvalidStateError("covariance below the uncertainty bound");
    const double nu = std::sqrt(std::max(det, 1.0));
    const double sc = (b - a) / (2.0 * nu);
    const double ss = -cs / nu;
    const double s2r = std::hypot(sc, ss);
    SqueezedThermalParams p;
    p.r = 0.5 * std::asinh(s2r);
    p.phi = s2r > 1e-14 ? std::atan2(ss, sc) : 0.0;
    // nu -> 1 is the pure limit; cap eps where e^{-eps} underflows anyway.
    p.eps = nu - 1.0 < 1e-300 ? 700.0
                              : std::min(700.0, std::log((nu + 1.0) / (nu - 1.0)));
    return p;
}

Covariance covariance_from_state(const Mat& rho, double omega,
                                 const UnitSystem& units) {
    const int dim = static_cast<int>(rho.rows());
    auto [x, p] = quadratures(dim, omega, units);
    Covariance v;
    v.vx = expectation(rho, x * x);
    v.vp = expectation(rho, p * p);
    v.c = 0.5 * expectation(rho, x * p + p * x);
    return v;
}

double variance_x(const SqueezedThermalParams& p, double omega,
                  const UnitSystem& units) {
    if (std::abs(p.phi) > 1e-12)
        throw WrongBranchError(
            "variance_x applies to phi = 0 states only; use covariance_closed");
    const double x0 = x_zpf(omega, units);
    return x0 * x0 * (2.0 * p.nbar() + 1.0) * std::exp(-2.0 * p.r);
}

double variance_ratio_db(double omega_ratio, double beta_ratio, double eps0) {
    if (!(omega_ratio > 0.0) || !(beta_ratio > 0.0) || !(eps0 > 0.0))
        throw OutOfDomainError("variance map needs positive ratios and eps0");
    const double eps_f = eps0 * omega_ratio * beta_ratio;
    return 10.0 *
           std::log10(std::tanh(0.5 * eps0) /
                      (omega_ratio * std::tanh(0.5 * eps_f)));
}

}  // namespace sqz
