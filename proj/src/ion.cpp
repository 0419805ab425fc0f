#include "sqz/ion.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "sqz/errors.hpp"
#include "sqz/master.hpp"

namespace sqz {

namespace {

void check_config(const IonModelConfig& cfg) {
    if (cfg.fock_dim < 2)
        throw InvalidDimensionError("ion model needs fock_dim >= 2");
    if (!(cfg.omega0 > 0.0))
        throw InvalidFrequencyError("ion model needs omega0 > 0");
    if (!(cfg.Delta > 0.0))
        throw InvalidFrequencyError("ion model needs Delta > 0");
    if (std::abs(cfg.eta2 - cfg.eta1) < 1e-12)
        throw DegenerateParameterError(
            "ion lasers need distinct Lamb-Dicke parameters");
}

Mat displacement_kick(double eta, int dim) {
    const Mat a = ladder(dim);
    return matrix_exponential(-kI * eta * (a + Mat(a.adjoint())));
}

/// Caches the two constant kick matrices; per call only the interaction
/// phases and envelopes change.
struct IonAssembler {
    IonModelConfig cfg;
    Mat v1, v2;
    std::vector<Complex> phase;  // e^{i theta d}, d = i - j in [-(N-1), N-1]
    Mat h;

    explicit IonAssembler(const IonModelConfig& c)
        : cfg(c),
          v1(displacement_kick(c.eta1, c.fock_dim)),
          v2(displacement_kick(c.eta2, c.fock_dim)),
          phase(2 * c.fock_dim - 1),
          h(Mat::Zero(2 * c.fock_dim, 2 * c.fock_dim)) {}

    void build(double t, double hbar) {
        const int n = cfg.fock_dim;
        const double theta = cfg.omega0 * t;
        for (int d = -(n - 1); d <= n - 1; ++d)
            phase[d + n - 1] = std::exp(kI * (theta * d));
        const double om = cfg.rabi ? cfg.rabi(t) : 0.0;
        // delta_1 = -omega0, delta_2 = +omega0
        const Complex c1 =
            0.5 * hbar * om * std::exp(kI * (-cfg.omega0 * t + cfg.Phi1));
        const Complex c2 =
            0.5 * hbar * om * std::exp(kI * (cfg.omega0 * t + cfg.Phi2));
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const Complex ge =
                    phase[i - j + n - 1] * (c1 * v1(i, j) + c2 * v2(i, j));
                h(i, n + j) = ge;
                h(n + j, i) = std::conj(ge);
            }
        }
        for (int i = 0; i < n; ++i) {
            h(i, i) = 0.5 * hbar * cfg.Delta;
            h(n + i, n + i) = -0.5 * hbar * cfg.Delta;
        }
    }
};

}  // namespace

double ion_rabi_envelope(const IonModelConfig& cfg, double alpha_abs) {
    check_config(cfg);
    if (!(alpha_abs >= 0.0))
        throw OutOfDomainError("ion Rabi envelope needs |alpha| >= 0");
    return 2.0 * std::sqrt(cfg.Delta * alpha_abs) / std::abs(cfg.eta2 - cfg.eta1);
}

Complex ion_effective_alpha(const IonModelConfig& cfg, double t) {
    check_config(cfg);
    if (!cfg.rabi) throw InvalidScheduleError("ion model needs a Rabi envelope");
    const double om = cfg.rabi(t);
    const double deta = cfg.eta2 - cfg.eta1;
    return deta * deta * om * om / (4.0 * cfg.Delta) *
           std::exp(kI * (cfg.Phi1 - cfg.Phi2));
}

Mat ion_hamiltonian(const IonModelConfig& cfg, double t) {
    check_config(cfg);
    IonAssembler a(cfg);
    a.build(t, UnitSystem{}.hbar);
    return a.h;
}

Mat ion_ground_vacuum(int fock_dim) {
    if (fock_dim < 2)
        throw InvalidDimensionError("ion model needs fock_dim >= 2");
    Mat rho = Mat::Zero(2 * fock_dim, 2 * fock_dim);
    rho(0, 0) = Complex(1.0, 0.0);
    return rho;
}

IonRunResult ion_propagate(const IonModelConfig& cfg, const Mat& rho0_full,
                           const TimeGrid& grid) {
    check_config(cfg);
    if (!cfg.rabi) throw InvalidScheduleError("ion model needs a Rabi envelope");
    const int n2 = 2 * cfg.fock_dim;
    if (rho0_full.rows() != n2 || rho0_full.cols() != n2)
        throw DimensionMismatchError("ion state must live on the doubled space");
    const double hbar = UnitSystem{}.hbar;
    auto assembler = std::make_shared<IonAssembler>(cfg);
    const MasterRhs rhs = [assembler, hbar](double t, const Mat& rho, Mat& out) {
        assembler->build(t, hbar);
        out = (-kI / hbar) * (assembler->h * rho - rho * assembler->h);
    };
    const TwoLevelFock tl{cfg.fock_dim};
    IonRunResult result;
    result.rho_full = propagate(rho0_full, grid, rhs, {},
                                [&](int, double, const Mat& rho) {
                                    result.max_excited = std::max(
                                        result.max_excited,
                                        tl.excited_population(rho));
                                });
    return result;
}

}  // namespace sqz
