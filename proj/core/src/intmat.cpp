#include "twist/intmat.hpp"

#include <cmath>
#include <complex>
#include <utility>

namespace twist {

IntMat::IntMat(int dim, std::vector<BigInt> entries) : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(dim) * dim)
        throw InvalidInputError("matrix entry count does not match dimension");
}

IntMat IntMat::identity(int dim) {
    IntMat m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::operator*(const IntMat& rhs) const {
    if (dim_ != rhs.dim_) throw InvalidInputError("matrix dimension mismatch");
    IntMat out(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int k = 0; k < dim_; ++k) {
            const BigInt& x = at(r, k);
            if (x == 0) continue;
            for (int c = 0; c < dim_; ++c) out.at(r, c) += x * rhs.at(k, c);
        }
    return out;
}

std::vector<BigInt> IntMat::apply(const std::vector<BigInt>& v) const {
    if (static_cast<int>(v.size()) != dim_) throw InvalidInputError("vector dimension mismatch");
    std::vector<BigInt> out(dim_, 0);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            if (at(r, c) != 0) out[r] += at(r, c) * v[c];
    return out;
}

namespace {

// Cofactor expansion. Dimensions are tiny, clarity wins over cleverness.
BigInt det_rec(const IntMat& m, std::vector<int>& rows, std::vector<int>& cols) {
    const std::size_t n = rows.size();
    if (n == 0) return 1;
    if (n == 1) return m.at(rows[0], cols[0]);
    BigInt acc = 0;
    int r0 = rows[0];
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < n; ++j) {
        const BigInt& pivot = m.at(r0, cols[j]);
        if (pivot == 0) continue;
        std::vector<int> sub_cols;
        sub_cols.reserve(n - 1);
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) sub_cols.push_back(cols[k]);
        BigInt minor = det_rec(m, sub_rows, sub_cols);
        if (j % 2 == 0)
            acc += pivot * minor;
        else
            acc -= pivot * minor;
    }
    return acc;
}

} // namespace

BigInt IntMat::determinant() const {
    std::vector<int> idx(dim_);
    for (int i = 0; i < dim_; ++i) idx[i] = i;
    std::vector<int> rows = idx, cols = idx;
    return det_rec(*this, rows, cols);
}

IntMat IntMat::adjugate() const {
    IntMat adj(dim_);
    if (dim_ == 1) {
        adj.at(0, 0) = 1;
        return adj;
    }
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) {
            std::vector<int> rows, cols;
            for (int i = 0; i < dim_; ++i)
                if (i != r) rows.push_back(i);
            for (int j = 0; j < dim_; ++j)
                if (j != c) cols.push_back(j);
            BigInt minor = det_rec(*this, rows, cols);
            adj.at(c, r) = ((r + c) % 2 == 0) ? minor : -minor;
        }
    return adj;
}

SmithForm smith_normal_form(const IntMat& m) {
    const int n = m.dim();
    IntMat a = m;
    IntMat row = IntMat::identity(n);

    auto swap_rows = [&](int i, int j) {
        for (int c = 0; c < n; ++c) {
            std::swap(a.at(i, c), a.at(j, c));
            std::swap(row.at(i, c), row.at(j, c));
        }
    };
    auto add_row = [&](int dst, int src, const BigInt& f) {
        for (int c = 0; c < n; ++c) {
            a.at(dst, c) += f * a.at(src, c);
            row.at(dst, c) += f * row.at(src, c);
        }
    };
    auto swap_cols = [&](int i, int j) {
        for (int r = 0; r < n; ++r) std::swap(a.at(r, i), a.at(r, j));
    };
    auto add_col = [&](int dst, int src, const BigInt& f) {
        for (int r = 0; r < n; ++r) a.at(r, dst) += f * a.at(r, src);
    };

    for (int t = 0; t < n; ++t) {
        // Find a nonzero pivot in the remaining block.
        int pr = -1, pc = -1;
        for (int r = t; r < n && pr < 0; ++r)
            for (int c = t; c < n; ++c)
                if (a.at(r, c) != 0) {
                    pr = r;
                    pc = c;
                    break;
                }
        if (pr < 0) break;
        if (pr != t) swap_rows(t, pr);
        if (pc != t) swap_cols(t, pc);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int r = t + 1; r < n; ++r) {
                if (a.at(r, t) == 0) continue;
                BigInt q = a.at(r, t) / a.at(t, t);
                add_row(r, t, -q);
                if (a.at(r, t) != 0) {
                    swap_rows(t, r);
                    dirty = true;
                }
            }
            for (int c = t + 1; c < n; ++c) {
                if (a.at(t, c) == 0) continue;
                BigInt q = a.at(t, c) / a.at(t, t);
                add_col(c, t, -q);
                if (a.at(t, c) != 0) {
                    swap_cols(t, c);
                    dirty = true;
                }
            }
        }
    }

    for (int i = 0; i < n; ++i)
        if (a.at(i, i) < 0) {
            for (int c = 0; c < n; ++c) row.at(i, c) = -row.at(i, c);
            a.at(i, i) = -a.at(i, i);
        }

    SmithForm out;
    out.diag.resize(n);
    for (int i = 0; i < n; ++i) out.diag[i] = a.at(i, i);
    out.row_transform = row;
    return out;
}

std::vector<BigInt> characteristic_polynomial(const IntMat& m) {
    // Faddeev-LeVerrier; all divisions are exact over the integers.
    const int n = m.dim();
    std::vector<BigInt> coeff(static_cast<std::size_t>(n) + 1);
    coeff[0] = 1;
    IntMat mk(n); // starts as zero
    for (int k = 1; k <= n; ++k) {
        for (int i = 0; i < n; ++i) mk.at(i, i) += coeff[k - 1];
        mk = m * mk;
        BigInt trace = 0;
        for (int i = 0; i < n; ++i) trace += mk.at(i, i);
        coeff[k] = -trace / k;
    }
    return coeff;
}

double min_root_modulus_gap_to_unit_circle(const std::vector<BigInt>& monic_poly) {
    using C = std::complex<double>;
    const int deg = static_cast<int>(monic_poly.size()) - 1;
    if (deg <= 0) return 1.0;
    std::vector<C> c(monic_poly.size());
    for (std::size_t i = 0; i < monic_poly.size(); ++i)
        c[i] = C(static_cast<double>(monic_poly[i]), 0.0);

    auto eval = [&](C x) {
        C acc = c[0];
        for (int i = 1; i <= deg; ++i) acc = acc * x + c[i];
        return acc;
    };

    // Durand-Kerner from a slightly irrational starting spiral.
    std::vector<C> roots(deg);
    for (int i = 0; i < deg; ++i)
        roots[i] = std::pow(C(0.4, 0.9), static_cast<double>(i + 1));
    for (int iter = 0; iter < 600; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            C denom(1.0, 0.0);
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (std::abs(denom) < 1e-300) denom = C(1e-300, 0);
            C delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }

    double gap = 1.0;
    for (const C& r : roots) gap = std::min(gap, std::fabs(std::abs(r) - 1.0));
    return gap;
}

std::string base64_encode(const std::uint8_t* data, std::size_t size) {
    static const char* tab = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((size + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= size) {
        std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back(tab[v & 63]);
        i += 3;
    }
    if (i + 1 == size) {
        std::uint32_t v = data[i] << 16;
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == size) {
        std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

} // namespace twist
