#ifndef SQZ_STOCHASTIC_HPP
#define SQZ_STOCHASTIC_HPP

#include <cstdint>
#include <vector>

#include "sqz/trap.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Counter-based uniform deviate in (0,1): a SplitMix64-style bit mix of
/// (seed, trajectory, step, draw). Stateless, so any trajectory/step is
/// reproducible in isolation and independent of thread scheduling.
/// step -1 is reserved for the initial thermal draw.
double uniform_sample(std::uint64_t seed, std::uint64_t trajectory,
                      std::int64_t step, std::uint32_t draw);

/// Two-point Ito increment sign at one step: +1 or -1, equiprobable.
/// The Wiener increment is xi = sign * sqrt(dt), which matches the Gaussian
/// increment in mean, variance and all odd moments, so the ensemble
/// converges weakly at first order exactly like the Gaussian scheme while
/// (dW)^2 = dt holds per realization, not just in expectation. That makes
/// the Ito norm cancellation of the drift counterterm exact at each step.
double rademacher_sample(std::uint64_t seed, std::uint64_t trajectory,
                         std::int64_t step);

/// Geometric Boltzmann draw of an initial Fock level for exp(-eps n),
/// inverse-CDF on one uniform (step -1, draw 0). Clamped to dim - 1; the
/// clamp probability e^{-eps dim} is far below double precision for every
/// grid this library uses.
int thermal_fock_draw(double eps, int dim, std::uint64_t seed,
                      std::uint64_t trajectory);

struct StochasticOptions {
    std::uint64_t seed = 0;
    int trajectories = 2000;
    int dim = 60;
    int steps = 8000;
    /// Trajectory counts at which to snapshot the running average,
    /// ascending; the last entry must equal `trajectories`.
    std::vector<int> checkpoints;
    /// Per-trajectory bound on |ln |prod_k <chi|psi>_k|| / tf, the total
    /// pre-rescale norm drift rate. A missing or mis-signed x^2 counterterm
    /// shows up here as an O(1) rate; the converged scheme sits orders of
    /// magnitude below the default.
    double max_drift_rate = 1e-3;
};

struct StochasticResult {
    /// Hermitized ensemble average (1/M) sum |psi><chi| per checkpoint.
    std::vector<Mat> averages;
    std::vector<int> checkpoints;
    /// Worst per-trajectory norm drift rate actually observed.
    double max_norm_drift = 0.0;
};

/// Unravels the trap master equation
///   drho/dt = -(i/hbar)[H(t), rho] - gamma(t) [x, [x, rho]]
/// into ket pairs sharing one Wiener path,
///   d|psi> = (-(i/hbar) H - gamma x^2) |psi> dt - i c x |psi> dW,
///   d|chi> = (-(i/hbar) H - gamma x^2) |chi> dt - i conj(c) x |chi> dW,
/// with c = sqrt(2 gamma) (principal branch). The |psi><chi| cross term
/// reproduces 2 gamma x rho x dt for either sign of gamma; with gamma >= 0
/// the kets coincide and the scheme reduces to the standard single-ket one.
/// The deterministic part advances with a two-stage (Heun) update so the
/// leading norm residual comes from the noise, and increments are two-point
/// (see rademacher_sample), keeping per-trajectory norm drift within
/// max_drift_rate; a breach throws StepSizeError.
/// Initial states are per-trajectory Boltzmann-drawn Fock levels, so the
/// ensemble also samples the thermal mixture. Trajectories are integrated
/// in chunks whose partial sums reduce in index order: the result is
/// bit-reproducible for a fixed seed regardless of thread count.
StochasticResult sample_trap_ensemble(const TrapProtocol& pr,
                                      const StochasticOptions& opt);

}  // namespace sqz

#endif
