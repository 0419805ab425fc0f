#ifndef SQZ_BANDED_HPP
#define SQZ_BANDED_HPP

#include "sqz/errors.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Band-diagonal operator on the number ladder. Every generator used by the
/// evolution kernels (a, a^dag, n, x, p, their squares and {x,p}) lives within
/// offsets [-2, 2], so products with a dense density matrix cost O(N^2)
/// instead of O(N^3). Storage is by diagonal: entry (row, col) with offset
/// o = col - row sits at bands(o - lo, col).
struct BandedOp {
    int dim = 0;
    int lo = 0;   // most negative stored offset
    int hi = 0;   // most positive stored offset
    Mat bands;    // (hi - lo + 1) x dim

    static BandedOp zero(int dim, int lo, int hi);

    Complex at(int row, int col) const;
    Mat to_dense() const;
    BandedOp adjoint() const;

    /// this += c * other. Bands widen to the union of offset ranges.
    void accumulate(Complex c, const BandedOp& other);
    void scale(Complex c) { bands *= c; }
};

/// Exact banded product, offsets add. Cost O(N b^2).
BandedOp multiply(const BandedOp& lhs, const BandedOp& rhs);

BandedOp add(const BandedOp& lhs, const BandedOp& rhs);

// --- kernels ----------------------------------------------------------------
// out must be preallocated to the matching size; kernels never allocate.
// The OpenMP pragmas split over columns; with one thread they reduce to the
// plain loops.

/// out = A * in
void band_mul_left(const BandedOp& a, const Mat& in, Mat& out);
/// out = in * A
void band_mul_right(const Mat& in, const BandedOp& a, Mat& out);
/// out += c * (A * in)
void band_mul_left_acc(Complex c, const BandedOp& a, const Mat& in, Mat& out);
/// out += c * (in * A)
void band_mul_right_acc(Complex c, const Mat& in, const BandedOp& a, Mat& out);
/// y = A * x for state vectors.
void band_apply(const BandedOp& a, const Vec& x, Vec& y);

// --- builders ---------------------------------------------------------------

BandedOp banded_ladder(int dim);           // a
BandedOp banded_ladder_dag(int dim);       // a^dag
BandedOp banded_number(int dim);           // a^dag a
BandedOp banded_identity(int dim);
BandedOp banded_x(int dim, double omega, const UnitSystem& units);
BandedOp banded_p(int dim, double omega, const UnitSystem& units);
BandedOp banded_a2(int dim);               // a^2
BandedOp banded_adag2(int dim);            // a^dag^2

}  // namespace sqz

#endif
