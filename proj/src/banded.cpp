#include "sqz/banded.hpp"

#include <algorithm>
#include <cmath>

namespace sqz {

BandedOp BandedOp::zero(int dim, int lo, int hi) {
    if (dim < 1 || lo > hi)
        throw InvalidDimensionError("BandedOp::zero bad shape");
    BandedOp b;
    b.dim = dim;
    b.lo = lo;
    b.hi = hi;
    b.bands = Mat::Zero(hi - lo + 1, dim);
    return b;
}

Complex BandedOp::at(int row, int col) const {
    const int o = col - row;
    if (o < lo || o > hi) return Complex(0.0, 0.0);
    return bands(o - lo, col);
}

Mat BandedOp::to_dense() const {
    Mat g = Mat::Zero(dim, dim);
    for (int o = lo; o <= hi; ++o)
        for (int col = std::max(0, o); col < std::min(dim, dim + o); ++col)
            g(col - o, col) = bands(o - lo, col);
    return g;
}

BandedOp BandedOp::adjoint() const {
    BandedOp out = zero(dim, -hi, -lo);
    for (int o = lo; o <= hi; ++o)
        for (int col = std::max(0, o); col < std::min(dim, dim + o); ++col) {
            const int row = col - o;
            // adjoint entry (col, row) has offset -o and column index row
            out.bands(-o - out.lo, row) = std::conj(bands(o - lo, col));
        }
    return out;
}

void BandedOp::accumulate(Complex c, const BandedOp& other) {
    if (other.dim != dim)
        throw DimensionMismatchError("BandedOp::accumulate dimension");
    if (other.lo < lo || other.hi > hi) {
        BandedOp widened =
            zero(dim, std::min(lo, other.lo), std::max(hi, other.hi));
        widened.bands.middleRows(lo - widened.lo, hi - lo + 1) = bands;
        *this = widened;
    }
    bands.middleRows(other.lo - lo, other.hi - other.lo + 1) +=
        c * other.bands;
}

BandedOp multiply(const BandedOp& lhs, const BandedOp& rhs) {
    if (lhs.dim != rhs.dim)
        throw DimensionMismatchError("banded multiply dimension");
    const int dim = lhs.dim;
    BandedOp out = BandedOp::zero(dim, lhs.lo + rhs.lo, lhs.hi + rhs.hi);
    // (LR)(i, j) = sum_k L(i, k) R(k, j); k = j - or, i = k - ol.
    for (int ol = lhs.lo; ol <= lhs.hi; ++ol)
        for (int orr = rhs.lo; orr <= rhs.hi; ++orr) {
            const int o = ol + orr;
            for (int j = 0; j < dim; ++j) {
                const int k = j - orr;
                const int i = j - o;
                if (k < 0 || k >= dim || i < 0 || i >= dim) continue;
                out.bands(o - out.lo, j) +=
                    lhs.bands(ol - lhs.lo, k) * rhs.bands(orr - rhs.lo, j);
            }
        }
    return out;
}

BandedOp add(const BandedOp& lhs, const BandedOp& rhs) {
    BandedOp out = lhs;
    out.accumulate(Complex(1.0, 0.0), rhs);
    return out;
}

void band_mul_left(const BandedOp& a, const Mat& in, Mat& out) {
    out.setZero();
    band_mul_left_acc(Complex(1.0, 0.0), a, in, out);
}

void band_mul_right(const Mat& in, const BandedOp& a, Mat& out) {
    out.setZero();
    band_mul_right_acc(Complex(1.0, 0.0), in, a, out);
}

void band_mul_left_acc(Complex c, const BandedOp& a, const Mat& in, Mat& out) {
    const int dim = a.dim;
    const int cols = static_cast<int>(in.cols());
    // out(i, col) += c * A(i, i+o) in(i+o, col); A(i, i+o) = bands(o-lo, i+o).
#pragma omp parallel for schedule(static)
    for (int col = 0; col < cols; ++col)
        for (int o = a.lo; o <= a.hi; ++o) {
            const int ib = std::max(0, -o);
            const int ie = std::min(dim, dim - o);
            for (int i = ib; i < ie; ++i)
                out(i, col) += c * a.bands(o - a.lo, i + o) * in(i + o, col);
        }
}

void band_mul_right_acc(Complex c, const Mat& in, const BandedOp& a, Mat& out) {
    const int dim = a.dim;
    const int rows = static_cast<int>(in.rows());
    // out(r, j) += c * in(r, j-o) A(j-o, j), column-parallel over j.
#pragma omp parallel for schedule(static)
    for (int j = 0; j < dim; ++j)
        for (int o = a.lo; o <= a.hi; ++o) {
            const int k = j - o;
            if (k < 0 || k >= dim) continue;
            const Complex w = c * a.bands(o - a.lo, j);
            for (int r = 0; r < rows; ++r) out(r, j) += w * in(r, k);
        }
}

void band_apply(const BandedOp& a, const Vec& x, Vec& y) {
    const int dim = a.dim;
    y.setZero();
    for (int o = a.lo; o <= a.hi; ++o) {
        const int ib = std::max(0, -o);
        const int ie = std::min(dim, dim - o);
        for (int i = ib; i < ie; ++i)
            y(i) += a.bands(o - a.lo, i + o) * x(i + o);
    }
}

BandedOp banded_ladder(int dim) {
    BandedOp b = BandedOp::zero(dim, 1, 1);
    for (int n = 1; n < dim; ++n) b.bands(0, n) = std::sqrt(double(n));
    return b;
}

BandedOp banded_ladder_dag(int dim) { return banded_ladder(dim).adjoint(); }

BandedOp banded_number(int dim) {
    BandedOp b = BandedOp::zero(dim, 0, 0);
    for (int n = 0; n < dim; ++n) b.bands(0, n) = double(n);
    return b;
}

BandedOp banded_identity(int dim) {
    BandedOp b = BandedOp::zero(dim, 0, 0);
    b.bands.setOnes();
    return b;
}

BandedOp banded_x(int dim, double omega, const UnitSystem& units) {
    if (omega <= 0.0) throw InvalidFrequencyError("banded_x omega");
    BandedOp b = banded_ladder(dim);
    b.accumulate(Complex(1.0, 0.0), banded_ladder_dag(dim));
    b.scale(x_zpf(omega, units));
    return b;
}

BandedOp banded_p(int dim, double omega, const UnitSystem& units) {
    if (omega <= 0.0) throw InvalidFrequencyError("banded_p omega");
    BandedOp b = banded_ladder_dag(dim);
    b.accumulate(Complex(-1.0, 0.0), banded_ladder(dim));
    b.scale(kI * p_zpf(omega, units));
    return b;
}

BandedOp banded_a2(int dim) {
    const BandedOp a = banded_ladder(dim);
    return multiply(a, a);
}

BandedOp banded_adag2(int dim) { return banded_a2(dim).adjoint(); }

}  // namespace sqz
