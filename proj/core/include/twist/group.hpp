#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twist/bytes.hpp"
#include "twist/intmat.hpp"

namespace twist {

enum class GroupKind { Lamplighter, BaumslagSolitar, MatrixModule };

/// Description of G = K x| <t>. Three shapes of K are supported:
///   Lamplighter     K = finitely supported maps Z -> Z_q, t shifts positions.
///   BaumslagSolitar K = Z[1/m], t multiplies by m.
///   MatrixModule    K = union of T^{-e} Z^d, t acts by the hyperbolic
///                   integer matrix T.
struct GroupSpec {
    GroupKind kind = GroupKind::Lamplighter;
    std::int64_t q = 0;             // Lamplighter, q >= 2
    std::int64_t m = 0;             // BaumslagSolitar, m >= 2
    int dim = 0;                    // MatrixModule
    std::vector<BigInt> matrix;     // row-major dim*dim entries
};

/// Canonical element of the module K. Instances are only produced by Group
/// factories and operations, which guarantees the stored form is reduced:
///   Lamplighter     lamps sorted by position, coefficients in [1, q-1].
///   BaumslagSolitar num / m^exp with exp = 0 or m not dividing num.
///   MatrixModule    T^{-level} vec with level = 0 or vec outside T Z^d.
class ModuleElement {
public:
    struct Lamp { std::vector<std::pair<std::int64_t, std::int64_t>> lamps; };
    struct Bs { BigInt num; std::int64_t exp = 0; };
    struct Mat { std::int64_t level = 0; std::vector<BigInt> vec; };

    bool is_zero() const;
    bool operator==(const ModuleElement& rhs) const {
        return spec_tag_ == rhs.spec_tag_ && data_ == rhs.data_;
    }
    bool operator!=(const ModuleElement& rhs) const { return !(*this == rhs); }

    const Lamp& lamp() const { return std::get<Lamp>(data_); }
    const Bs& bs() const { return std::get<Bs>(data_); }
    const Mat& mat() const { return std::get<Mat>(data_); }

    std::uint32_t spec_tag() const { return spec_tag_; }

private:
    friend class Group;
    std::uint32_t spec_tag_ = 0;
    std::variant<Lamp, Bs, Mat> data_;
};

inline bool operator==(const ModuleElement::Lamp& a, const ModuleElement::Lamp& b) {
    return a.lamps == b.lamps;
}
inline bool operator==(const ModuleElement::Bs& a, const ModuleElement::Bs& b) {
    return a.num == b.num && a.exp == b.exp;
}
inline bool operator==(const ModuleElement::Mat& a, const ModuleElement::Mat& b) {
    return a.level == b.level && a.vec == b.vec;
}

/// Group element t^shift * k. Equality and hashing are on the canonical pair.
struct GroupElement {
    std::int64_t shift = 0;
    ModuleElement k;

    bool operator==(const GroupElement& rhs) const { return shift == rhs.shift && k == rhs.k; }
    bool operator!=(const GroupElement& rhs) const { return !(*this == rhs); }
};

/// Exact arithmetic for one fixed GroupSpec. Construction validates the spec,
/// including the unit-circle eigenvalue gate for MatrixModule. All methods
/// are const and all values immutable, so a Group and its elements can be
/// shared freely across threads.
class Group {
public:
    explicit Group(GroupSpec spec);

    const GroupSpec& spec() const { return spec_; }
    GroupKind kind() const { return spec_.kind; }
    std::uint32_t tag() const { return tag_; }

    // ---- module K -------------------------------------------------------
    ModuleElement zero() const;
    /// Lamplighter element from (position, coefficient) pairs.
    ModuleElement lamp_element(std::vector<std::pair<std::int64_t, std::int64_t>> lamps) const;
    /// Baumslag-Solitar element num / m^exp.
    ModuleElement bs_element(BigInt num, std::int64_t exp = 0) const;
    /// MatrixModule element T^{-level} vec.
    ModuleElement lattice_element(std::vector<BigInt> vec, std::int64_t level = 0) const;
    /// Kind-appropriate embedding of an integer: lamp coefficient at
    /// position 0, a plain integer in Z[1/m], or v times the first basis
    /// vector of Z^d.
    ModuleElement integer_element(const BigInt& v) const;

    ModuleElement add(const ModuleElement& a, const ModuleElement& b) const;
    ModuleElement negated(const ModuleElement& a) const;
    /// Applies T^i (the t action), exactly, for any sign of i.
    ModuleElement shifted(const ModuleElement& a, std::int64_t i) const;
    ModuleElement scaled(const ModuleElement& a, std::int64_t n) const;

    // ---- group G ---------------------------------------------------------
    GroupElement identity() const { return GroupElement{0, zero()}; }
    GroupElement element(std::int64_t shift, ModuleElement k) const;
    /// (t^a k1)(t^b k2) = t^{a+b} (T^{-b} k1 + k2); the convention is
    /// t k t^{-1} = T(k) throughout.
    GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
    GroupElement inverse(const GroupElement& g) const;

    // ---- canonical bytes ------------------------------------------------
    void pack(const GroupElement& g, std::vector<std::uint8_t>& out) const;
    void pack(const ModuleElement& k, std::vector<std::uint8_t>& out) const;
    GroupElement unpack(const std::uint8_t* data, std::size_t size) const;
    std::uint64_t hash(const GroupElement& g) const;
    /// Packed bytes as a string, usable as a map key.
    std::string key(const GroupElement& g) const;
    std::string key(const ModuleElement& k) const;

    std::string format(const ModuleElement& k) const;
    std::string format(const GroupElement& g) const;

    // ---- MatrixModule internals -----------------------------------------
    const IntMat& matrix() const;
    const BigInt& matrix_det() const;
    const SmithForm& smith() const;
    /// T^i for i >= 0.
    IntMat matrix_power(std::int64_t i) const;
    /// If v is in T Z^d, writes T^{-1} v into out and returns true.
    bool lattice_divide(const std::vector<BigInt>& v, std::vector<BigInt>& out) const;

    void check_same(const ModuleElement& a) const;

private:
    ModuleElement make(ModuleElement::Lamp&& l) const;
    ModuleElement make(ModuleElement::Bs&& b) const;
    ModuleElement make(ModuleElement::Mat&& m) const;

    GroupSpec spec_;
    std::uint32_t tag_ = 0;
    // MatrixModule caches, fixed at construction.
    IntMat t_;
    IntMat adj_;
    BigInt det_;
    SmithForm smith_;
    std::vector<IntMat> powers_; // T^0 .. T^kPowerCache
};

} // namespace twist
