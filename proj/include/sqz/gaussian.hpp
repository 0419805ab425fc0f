#ifndef SQZ_GAUSSIAN_HPP
#define SQZ_GAUSSIAN_HPP

#include <functional>

#include "sqz/raman.hpp"
#include "sqz/squeezed_state.hpp"
#include "sqz/trap.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Quadratic generator H = (h_xx/2) x^2 + (h_pp/2) p^2 + (h_xp/2) {x,p}
/// plus additive covariance noise dVx/dt += d_xx, dVp/dt += d_pp. Every
/// protocol in the library is Gaussian-preserving, so second moments close:
///   Vx'  =  2 h_pp C  + 2 h_xp Vx + d_xx
///   Vp'  = -2 h_xx C  - 2 h_xp Vp + d_pp
///   C'   =    h_pp Vp -   h_xx Vx
/// (first moments stay zero for the centered states used here).
struct QuadraticGenerator {
    double h_xx = 0.0;
    double h_pp = 0.0;
    double h_xp = 0.0;
    double d_xx = 0.0;
    double d_pp = 0.0;
};

using GeneratorFn = std::function<QuadraticGenerator(double)>;

using CovarianceObserver =
    std::function<void(int step, double t, const Covariance&)>;

/// RK4 on the closed moment equations. Independent of the Fock-space
/// propagator in both representation and truncation, which is what makes it
/// usable as a cross-check oracle.
Covariance evolve_covariance(Covariance v, const TimeGrid& grid,
                             const GeneratorFn& gen,
                             const CovarianceObserver& observer = nullptr);

/// Lab-frame trap generator: h_pp = 1/m, h_xx = m omega_c^2(t), and the
/// position-dephasing momentum diffusion d_pp = 2 hbar^2 gamma(t).
QuadraticGenerator trap_generator(const TrapProtocol& pr, double t);

/// Rotated-frame drive generator for alpha = alpha_R + i alpha_I:
/// h_xx = 2 m omega0 alpha_R, h_pp = -2 alpha_R / (m omega0),
/// h_xp = -2 alpha_I, and the balanced ladder dissipator's diffusion
/// d_xx = 4 kappa x0^2, d_pp = 4 kappa p0^2.
QuadraticGenerator raman_generator(const RamanControls& c, double omega0,
                                   const UnitSystem& units = {});

/// Uhlmann fidelity of two centered one-mode Gaussian states, exact closed
/// form: with scaled covariances 2V/hbar, F = 2 / (sqrt(D + L) - sqrt(L)),
/// D = det(Va + Vb) scaled, L = (det Va - 1)(det Vb - 1) scaled.
double gaussian_fidelity(const Covariance& a, const Covariance& b,
                         const UnitSystem& units = {});

/// Von Neumann entropy from the symplectic eigenvalue nu = 2 sqrt(det)/hbar.
double covariance_entropy(const Covariance& v, const UnitSystem& units = {});

}  // namespace sqz

#endif
