#pragma once

#include <cstdint>
#include <vector>

#include "twist/bytes.hpp"

namespace twist {

/// Dense square integer matrix with exact arithmetic. Dimensions stay tiny
/// (d <= 6 in practice), so everything is straightforward O(d^3) or worse.
class IntMat {
public:
    IntMat() : dim_(0) {}
    explicit IntMat(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, 0) {}
    IntMat(int dim, std::vector<BigInt> entries);

    static IntMat identity(int dim);

    int dim() const { return dim_; }
    const BigInt& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
    BigInt& at(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }

    IntMat operator*(const IntMat& rhs) const;
    std::vector<BigInt> apply(const std::vector<BigInt>& v) const;

    BigInt determinant() const;
    /// Adjugate matrix: *this * adjugate() == determinant() * I.
    IntMat adjugate() const;

    bool operator==(const IntMat& rhs) const { return dim_ == rhs.dim_ && a_ == rhs.a_; }

private:
    int dim_;
    std::vector<BigInt> a_;
};

/// Diagonalization of T by unimodular row and column operations:
/// row_transform * T * C is diagonal with nonnegative entries `diag` for some
/// unimodular C that is not kept. That is all coset arithmetic in
/// Z^d / T Z^d needs: x and y are congruent mod T Z^d exactly when
/// row_transform*x and row_transform*y agree componentwise mod diag.
/// (The invariant-factor divisibility chain of the full Smith form is not
/// enforced; the quotient enumeration is identical without it.)
struct SmithForm {
    std::vector<BigInt> diag;
    IntMat row_transform;
};

SmithForm smith_normal_form(const IntMat& m);

/// Characteristic polynomial det(xI - T), exact integer coefficients,
/// leading coefficient first (monic).
std::vector<BigInt> characteristic_polynomial(const IntMat& m);

/// Smallest distance from any complex root modulus to 1, found by
/// double-precision simultaneous (Durand-Kerner) iteration. Adequate for the
/// small degrees and modest coefficients this library handles.
double min_root_modulus_gap_to_unit_circle(const std::vector<BigInt>& monic_poly);

} // namespace twist
