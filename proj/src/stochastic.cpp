#include "sqz/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sqz/banded.hpp"
#include "sqz/errors.hpp"

namespace sqz {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t key_hash(std::uint64_t seed, std::uint64_t trajectory,
                       std::int64_t step, std::uint32_t draw) {
    std::uint64_t h = mix64(seed ^ 0x73646520706169ULL);
    h = mix64(h ^ trajectory);
    h = mix64(h ^ static_cast<std::uint64_t>(step));
    h = mix64(h ^ draw);
    return h;
}

struct SdeWorkspace {
    Vec t1, t2, f1, f2, pred, xv;
    explicit SdeWorkspace(int dim)
        : t1(dim), t2(dim), f1(dim), f2(dim), pred(dim), xv(dim) {}
};

}  // namespace

double uniform_sample(std::uint64_t seed, std::uint64_t trajectory,
                      std::int64_t step, std::uint32_t draw) {
    const std::uint64_t h = key_hash(seed, trajectory, step, draw);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double rademacher_sample(std::uint64_t seed, std::uint64_t trajectory,
                         std::int64_t step) {
    return (key_hash(seed, trajectory, step, 0) & 1u) ? 1.0 : -1.0;
}

int thermal_fock_draw(double eps, int dim, std::uint64_t seed,
                      std::uint64_t trajectory) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw UnsupportedTemperatureError("thermal draw needs eps > 0");
    if (dim < 2) throw InvalidDimensionError("thermal draw needs dim >= 2");
    const double u = uniform_sample(seed, trajectory, -1, 0);
    const int n = static_cast<int>(std::floor(-std::log(u) / eps));
    return std::min(n, dim - 1);
}

StochasticResult sample_trap_ensemble(const TrapProtocol& pr,
                                      const StochasticOptions& opt) {
    const int dim = opt.dim;
    const int steps = opt.steps;
    const int total = opt.trajectories;
    if (dim < 2) throw InvalidDimensionError("ensemble needs dim >= 2");
    if (steps < 1) throw InvalidScheduleError("ensemble needs steps >= 1");
    if (total < 1) throw InvalidScheduleError("ensemble needs trajectories >= 1");
    if (opt.checkpoints.empty())
        throw InvalidScheduleError("ensemble needs at least one checkpoint");
    for (std::size_t i = 0; i < opt.checkpoints.size(); ++i) {
        const int c = opt.checkpoints[i];
        if (c < 1 || c > total || (i > 0 && c <= opt.checkpoints[i - 1]))
            throw InvalidScheduleError(
                "checkpoints must be ascending counts within the ensemble");
    }
    if (opt.checkpoints.back() != total)
        throw InvalidScheduleError("last checkpoint must equal the ensemble size");

    const double tf = pr.tf();
    const double dt = tf / steps;
    const double sqrt_dt = std::sqrt(dt);
    const double m = pr.units().mass;
    const double hbar = pr.units().hbar;
    const double eps0 = pr.eps(0.0);

    const BandedOp xb = banded_x(dim, pr.omega_0(), pr.units());
    const BandedOp x2b = multiply(xb, xb);
    const BandedOp pb = banded_p(dim, pr.omega_0(), pr.units());
    const BandedOp p2b = multiply(pb, pb);

    // A(t) v = z_p (p^2 v) + z_x(t) (x^2 v): the commutator drift plus the
    // -gamma x^2 counterterm in one pass.
    const Complex z_p = -kI / (2.0 * m * hbar);
    std::vector<Complex> z_x(steps + 1);
    std::vector<Complex> c_noise(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        const TrapControls c = pr.controls(tf * k / steps);
        z_x[k] = -kI * (0.5 * m * c.omega_c_sq / hbar) - c.gamma;
        c_noise[k] = std::sqrt(Complex(2.0 * c.gamma, 0.0));
    }

    const auto apply_a = [&](const Vec& v, int k, SdeWorkspace& w, Vec& out) {
        band_apply(p2b, v, w.t1);
        band_apply(x2b, v, w.t2);
        out = z_p * w.t1 + z_x[k] * w.t2;
    };

    // Heun on the deterministic part, two-point Ito increment on the noise.
    const auto step_ket = [&](Vec& v, int k, double xi, Complex cn,
                              SdeWorkspace& w) {
        apply_a(v, k, w, w.f1);
        w.pred = v + dt * w.f1;
        apply_a(w.pred, k + 1, w, w.f2);
        band_apply(xb, v, w.xv);
        v += (0.5 * dt) * (w.f1 + w.f2) + (-kI * cn * xi) * w.xv;
    };

    const auto integrate_one = [&](int traj, Vec& psi, Vec& chi,
                                   double& drift_rate) {
        SdeWorkspace w(dim);
        const int n0 = thermal_fock_draw(eps0, dim, opt.seed, traj);
        psi.setZero(dim);
        psi[n0] = Complex(1.0, 0.0);
        chi = psi;
        double log_norm = 0.0;
        for (int k = 0; k < steps; ++k) {
            const double xi =
                rademacher_sample(opt.seed, traj, k) * sqrt_dt;
            step_ket(psi, k, xi, c_noise[k], w);
            step_ket(chi, k, xi, std::conj(c_noise[k]), w);
            const Complex g = chi.dot(psi);
            log_norm += std::log(std::abs(g));
            const Complex s = std::sqrt(g);
            psi /= s;
            chi /= std::conj(s);
            // rebalance the pair; |psi><chi| and <chi|psi> are invariant
            const double lam = std::sqrt(psi.norm() / chi.norm());
            psi /= lam;
            chi *= lam;
        }
        drift_rate = std::abs(log_norm) / tf;
    };

    constexpr int kChunk = 16;
    std::vector<Vec> kets(2 * kChunk, Vec(dim));
    std::vector<double> drifts(kChunk, 0.0);

    StochasticResult result;
    result.checkpoints = opt.checkpoints;
    Mat sum = Mat::Zero(dim, dim);
    std::size_t next_cp = 0;

    for (int base = 0; base < total; base += kChunk) {
        const int n_here = std::min(kChunk, total - base);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_here; ++i)
            integrate_one(base + i, kets[2 * i], kets[2 * i + 1], drifts[i]);
        for (int i = 0; i < n_here; ++i) {
            if (!(drifts[i] <= opt.max_drift_rate))
                throw StepSizeError(
                    "stochastic norm drift rate " + std::to_string(drifts[i]) +
                        " exceeds " + std::to_string(opt.max_drift_rate),
                    0.5 * dt);
            result.max_norm_drift = std::max(result.max_norm_drift, drifts[i]);
            sum.noalias() += kets[2 * i] * kets[2 * i + 1].adjoint();
            const int count = base + i + 1;
            if (next_cp < result.checkpoints.size() &&
                count == result.checkpoints[next_cp]) {
                const Mat avg = sum / static_cast<double>(count);
                result.averages.push_back(0.5 * (avg + avg.adjoint()));
                ++next_cp;
            }
        }
    }
    return result;
}

}  // namespace sqz
