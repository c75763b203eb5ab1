#include "twist/group.hpp"

#include <algorithm>
#include <sstream>

namespace twist {

namespace {
constexpr std::int64_t kPowerCache = 64;
} // namespace

bool ModuleElement::is_zero() const {
    if (const auto* l = std::get_if<Lamp>(&data_)) return l->lamps.empty();
    if (const auto* b = std::get_if<Bs>(&data_)) return b->num == 0;
    const auto& m = std::get<Mat>(data_);
    for (const auto& v : m.vec)
        if (v != 0) return false;
    return true;
}

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
    switch (spec_.kind) {
    case GroupKind::Lamplighter:
        if (spec_.q < 2) throw InvalidInputError("lamplighter modulus q must be >= 2");
        break;
    case GroupKind::BaumslagSolitar:
        if (spec_.m < 2) throw InvalidInputError("Baumslag-Solitar base m must be >= 2");
        break;
    case GroupKind::MatrixModule: {
        if (spec_.dim < 1) throw InvalidInputError("matrix dimension must be >= 1");
        if (spec_.matrix.size() != static_cast<std::size_t>(spec_.dim) * spec_.dim)
            throw InvalidInputError("matrix entry count does not match dimension");
        t_ = IntMat(spec_.dim, spec_.matrix);
        det_ = t_.determinant();
        if (det_ == 0) throw InvalidInputError("matrix must be invertible over the rationals");
        double gap = min_root_modulus_gap_to_unit_circle(characteristic_polynomial(t_));
        if (gap < 1e-9)
            throw InvalidInputError(
                "matrix is not hyperbolic: an eigenvalue lies within 1e-9 of the unit circle");
        adj_ = t_.adjugate();
        smith_ = smith_normal_form(t_);
        powers_.reserve(kPowerCache + 1);
        powers_.push_back(IntMat::identity(spec_.dim));
        for (std::int64_t i = 1; i <= kPowerCache; ++i) powers_.push_back(powers_.back() * t_);
        break;
    }
    }

    // Fingerprint so elements from different specs cannot silently mix.
    std::vector<std::uint8_t> buf;
    ByteWriter w(buf);
    w.u8(static_cast<std::uint8_t>(spec_.kind));
    w.svarint(spec_.q);
    w.svarint(spec_.m);
    w.svarint(spec_.dim);
    for (const auto& e : spec_.matrix) w.bigint(e);
    tag_ = static_cast<std::uint32_t>(hash_bytes(buf.data(), buf.size()) | 1);
}

void Group::check_same(const ModuleElement& a) const {
    if (a.spec_tag() != tag_)
        throw SpecMismatchError("module element belongs to a different group spec");
}

ModuleElement Group::make(ModuleElement::Lamp&& l) const {
    ModuleElement e;
    e.spec_tag_ = tag_;
    e.data_ = std::move(l);
    return e;
}
ModuleElement Group::make(ModuleElement::Bs&& b) const {
    ModuleElement e;
    e.spec_tag_ = tag_;
    e.data_ = std::move(b);
    return e;
}
ModuleElement Group::make(ModuleElement::Mat&& m) const {
    ModuleElement e;
    e.spec_tag_ = tag_;
    e.data_ = std::move(m);
    return e;
}

ModuleElement Group::zero() const {
    switch (spec_.kind) {
    case GroupKind::Lamplighter: return make(ModuleElement::Lamp{});
    case GroupKind::BaumslagSolitar: return make(ModuleElement::Bs{0, 0});
    case GroupKind::MatrixModule:
        return make(ModuleElement::Mat{0, std::vector<BigInt>(spec_.dim, 0)});
    }
    throw Error("unreachable");
}

ModuleElement Group::lamp_element(std::vector<std::pair<std::int64_t, std::int64_t>> lamps) const {
    if (spec_.kind != GroupKind::Lamplighter)
        throw SpecMismatchError("lamp_element on a non-lamplighter group");
    std::sort(lamps.begin(), lamps.end());
    ModuleElement::Lamp out;
    for (std::size_t i = 0; i < lamps.size();) {
        std::int64_t pos = lamps[i].first;
        std::int64_t c = 0;
        while (i < lamps.size() && lamps[i].first == pos) {
            c = (c + lamps[i].second) % spec_.q;
            ++i;
        }
        c = ((c % spec_.q) + spec_.q) % spec_.q;
        if (c != 0) out.lamps.emplace_back(pos, c);
    }
    return make(std::move(out));
}

ModuleElement Group::bs_element(BigInt num, std::int64_t exp) const {
    if (spec_.kind != GroupKind::BaumslagSolitar)
        throw SpecMismatchError("bs_element on a non-BS group");
    if (exp < 0) throw InvalidInputError("denominator exponent must be >= 0");
    if (num == 0) exp = 0;
    while (exp > 0 && num % spec_.m == 0) {
        num /= spec_.m;
        --exp;
    }
    return make(ModuleElement::Bs{std::move(num), exp});
}

ModuleElement Group::lattice_element(std::vector<BigInt> vec, std::int64_t level) const {
    if (spec_.kind != GroupKind::MatrixModule)
        throw SpecMismatchError("lattice_element on a non-matrix group");
    if (static_cast<int>(vec.size()) != spec_.dim)
        throw InvalidInputError("vector dimension mismatch");
    if (level < 0) throw InvalidInputError("level must be >= 0");
    bool zero = std::all_of(vec.begin(), vec.end(), [](const BigInt& v) { return v == 0; });
    if (zero) return make(ModuleElement::Mat{0, std::move(vec)});
    std::vector<BigInt> reduced;
    while (level > 0 && lattice_divide(vec, reduced)) {
        vec = reduced;
        --level;
    }
    return make(ModuleElement::Mat{level, std::move(vec)});
}

ModuleElement Group::integer_element(const BigInt& v) const {
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        std::int64_t c = static_cast<std::int64_t>(((v % spec_.q) + spec_.q) % spec_.q);
        if (c == 0) return zero();
        return lamp_element({{0, c}});
    }
    case GroupKind::BaumslagSolitar: return bs_element(v, 0);
    case GroupKind::MatrixModule: {
        std::vector<BigInt> vec(spec_.dim, 0);
        vec[0] = v;
        return lattice_element(std::move(vec), 0);
    }
    }
    throw Error("unreachable");
}

bool Group::lattice_divide(const std::vector<BigInt>& v, std::vector<BigInt>& out) const {
    std::vector<BigInt> w = adj_.apply(v);
    for (auto& x : w) {
        if (x % det_ != 0) return false;
        x /= det_;
    }
    out = std::move(w);
    return true;
}

ModuleElement Group::add(const ModuleElement& a, const ModuleElement& b) const {
    check_same(a);
    check_same(b);
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        const auto &la = a.lamp().lamps, &lb = b.lamp().lamps;
        std::vector<std::pair<std::int64_t, std::int64_t>> merged;
        merged.reserve(la.size() + lb.size());
        merged.insert(merged.end(), la.begin(), la.end());
        merged.insert(merged.end(), lb.begin(), lb.end());
        return lamp_element(std::move(merged));
    }
    case GroupKind::BaumslagSolitar: {
        const auto &x = a.bs(), &y = b.bs();
        std::int64_t e = std::max(x.exp, y.exp);
        BigInt num = x.num * pow(BigInt(spec_.m), static_cast<unsigned>(e - x.exp)) +
                     y.num * pow(BigInt(spec_.m), static_cast<unsigned>(e - y.exp));
        return bs_element(std::move(num), e);
    }
    case GroupKind::MatrixModule: {
        const auto &x = a.mat(), &y = b.mat();
        std::int64_t e = std::max(x.level, y.level);
        std::vector<BigInt> vx = matrix_power(e - x.level).apply(x.vec);
        std::vector<BigInt> vy = matrix_power(e - y.level).apply(y.vec);
        for (int i = 0; i < spec_.dim; ++i) vx[i] += vy[i];
        return lattice_element(std::move(vx), e);
    }
    }
    throw Error("unreachable");
}

ModuleElement Group::negated(const ModuleElement& a) const {
    check_same(a);
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        ModuleElement::Lamp out;
        out.lamps = a.lamp().lamps;
        for (auto& [pos, c] : out.lamps) c = spec_.q - c;
        return make(std::move(out));
    }
    case GroupKind::BaumslagSolitar: {
        ModuleElement::Bs out = a.bs();
        out.num = -out.num;
        return make(std::move(out));
    }
    case GroupKind::MatrixModule: {
        ModuleElement::Mat out = a.mat();
        for (auto& v : out.vec) v = -v;
        return make(std::move(out));
    }
    }
    throw Error("unreachable");
}

ModuleElement Group::shifted(const ModuleElement& a, std::int64_t i) const {
    check_same(a);
    if (i == 0) return a;
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        ModuleElement::Lamp out;
        out.lamps = a.lamp().lamps;
        for (auto& [pos, c] : out.lamps) pos += i;
        return make(std::move(out));
    }
    case GroupKind::BaumslagSolitar: {
        ModuleElement::Bs x = a.bs();
        if (i > 0) {
            std::int64_t d = std::min(x.exp, i);
            x.exp -= d;
            if (i > d) x.num *= pow(BigInt(spec_.m), static_cast<unsigned>(i - d));
            return make(std::move(x));
        }
        return bs_element(std::move(x.num), x.exp - i);
    }
    case GroupKind::MatrixModule: {
        ModuleElement::Mat x = a.mat();
        if (i > 0) {
            std::int64_t d = std::min(x.level, i);
            x.level -= d;
            if (i > d) x.vec = matrix_power(i - d).apply(x.vec);
            return make(std::move(x));
        }
        return lattice_element(std::move(x.vec), x.level - i);
    }
    }
    throw Error("unreachable");
}

ModuleElement Group::scaled(const ModuleElement& a, std::int64_t n) const {
    check_same(a);
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        std::vector<std::pair<std::int64_t, std::int64_t>> lamps = a.lamp().lamps;
        std::int64_t f = ((n % spec_.q) + spec_.q) % spec_.q;
        for (auto& [pos, c] : lamps) c = c * f % spec_.q;
        return lamp_element(std::move(lamps));
    }
    case GroupKind::BaumslagSolitar: return bs_element(a.bs().num * n, a.bs().exp);
    case GroupKind::MatrixModule: {
        std::vector<BigInt> vec = a.mat().vec;
        for (auto& v : vec) v *= n;
        return lattice_element(std::move(vec), a.mat().level);
    }
    }
    throw Error("unreachable");
}

GroupElement Group::element(std::int64_t shift, ModuleElement k) const {
    check_same(k);
    return GroupElement{shift, std::move(k)};
}

GroupElement Group::multiply(const GroupElement& g, const GroupElement& h) const {
    return GroupElement{g.shift + h.shift, add(shifted(g.k, -h.shift), h.k)};
}

GroupElement Group::inverse(const GroupElement& g) const {
    return GroupElement{-g.shift, negated(shifted(g.k, g.shift))};
}

void Group::pack(const ModuleElement& k, std::vector<std::uint8_t>& out) const {
    check_same(k);
    ByteWriter w(out);
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        const auto& lamps = k.lamp().lamps;
        w.uvarint(lamps.size());
        for (const auto& [pos, c] : lamps) {
            w.svarint(pos);
            w.uvarint(static_cast<std::uint64_t>(c));
        }
        break;
    }
    case GroupKind::BaumslagSolitar:
        w.uvarint(static_cast<std::uint64_t>(k.bs().exp));
        w.bigint(k.bs().num);
        break;
    case GroupKind::MatrixModule:
        w.uvarint(static_cast<std::uint64_t>(k.mat().level));
        for (const auto& v : k.mat().vec) w.bigint(v);
        break;
    }
}

void Group::pack(const GroupElement& g, std::vector<std::uint8_t>& out) const {
    ByteWriter w(out);
    w.svarint(g.shift);
    pack(g.k, out);
}

GroupElement Group::unpack(const std::uint8_t* data, std::size_t size) const {
    ByteReader r(data, size);
    std::int64_t shift = r.svarint();
    ModuleElement k;
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        ModuleElement::Lamp l;
        std::size_t n = r.uvarint();
        l.lamps.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t pos = r.svarint();
            std::int64_t c = static_cast<std::int64_t>(r.uvarint());
            l.lamps.emplace_back(pos, c);
        }
        k = make(std::move(l));
        break;
    }
    case GroupKind::BaumslagSolitar: {
        ModuleElement::Bs b;
        b.exp = static_cast<std::int64_t>(r.uvarint());
        b.num = r.bigint();
        k = make(std::move(b));
        break;
    }
    case GroupKind::MatrixModule: {
        ModuleElement::Mat m;
        m.level = static_cast<std::int64_t>(r.uvarint());
        m.vec.reserve(spec_.dim);
        for (int i = 0; i < spec_.dim; ++i) m.vec.push_back(r.bigint());
        k = make(std::move(m));
        break;
    }
    }
    return GroupElement{shift, std::move(k)};
}

std::uint64_t Group::hash(const GroupElement& g) const {
    std::vector<std::uint8_t> buf;
    pack(g, buf);
    return hash_bytes(buf.data(), buf.size());
}

std::string Group::key(const GroupElement& g) const {
    std::vector<std::uint8_t> buf;
    pack(g, buf);
    return std::string(buf.begin(), buf.end());
}

std::string Group::key(const ModuleElement& k) const {
    std::vector<std::uint8_t> buf;
    pack(k, buf);
    return std::string(buf.begin(), buf.end());
}

IntMat Group::matrix_power(std::int64_t i) const {
    if (i < 0) throw InvalidInputError("matrix_power expects i >= 0");
    if (i < static_cast<std::int64_t>(powers_.size())) return powers_[i];
    IntMat acc = powers_.back();
    for (std::int64_t j = powers_.size() - 1; j < i; ++j) acc = acc * t_;
    return acc;
}

const IntMat& Group::matrix() const {
    if (spec_.kind != GroupKind::MatrixModule) throw SpecMismatchError("not a matrix group");
    return t_;
}
const BigInt& Group::matrix_det() const {
    if (spec_.kind != GroupKind::MatrixModule) throw SpecMismatchError("not a matrix group");
    return det_;
}
const SmithForm& Group::smith() const {
    if (spec_.kind != GroupKind::MatrixModule) throw SpecMismatchError("not a matrix group");
    return smith_;
}

std::string Group::format(const ModuleElement& k) const {
    check_same(k);
    std::ostringstream os;
    switch (spec_.kind) {
    case GroupKind::Lamplighter: {
        if (k.lamp().lamps.empty()) return "0";
        os << "{";
        bool first = true;
        for (const auto& [pos, c] : k.lamp().lamps) {
            if (!first) os << ", ";
            first = false;
            os << pos << ":" << c;
        }
        os << "}";
        break;
    }
    case GroupKind::BaumslagSolitar:
        os << k.bs().num;
        if (k.bs().exp > 0) os << "/" << spec_.m << "^" << k.bs().exp;
        break;
    case GroupKind::MatrixModule: {
        if (k.mat().level > 0) os << "T^-" << k.mat().level << "*";
        os << "(";
        for (int i = 0; i < spec_.dim; ++i) {
            if (i) os << " ";
            os << k.mat().vec[i];
        }
        os << ")";
        break;
    }
    }
    return os.str();
}

std::string Group::format(const GroupElement& g) const {
    std::ostringstream os;
    os << "t^" << g.shift << " . " << format(g.k);
    return os.str();
}

} // namespace twist
