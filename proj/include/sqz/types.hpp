#ifndef SQZ_TYPES_HPP
#define SQZ_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace sqz {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// hbar and mass are kept symbolic so the quadrature scalings stay honest;
/// every frequency is passed explicitly.
struct UnitSystem {
    double hbar = 1.0;
    double mass = 1.0;
};

/// Oscillator length/momentum scales at frequency omega.
inline double x_zpf(double omega, const UnitSystem& u) {
    return std::sqrt(u.hbar / (2.0 * u.mass * omega));
}
inline double p_zpf(double omega, const UnitSystem& u) {
    return std::sqrt(u.hbar * u.mass * omega / 2.0);
}

/// Execution backend for kernels that exist in both flavors. The serial
/// path is the reference; the parallel path must reproduce it exactly.
enum class Backend { serial_reference, parallel };

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double phi) {
    double w = std::remainder(phi, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

}  // namespace sqz

#endif
