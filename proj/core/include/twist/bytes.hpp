#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twist/errors.hpp"

namespace twist {

using BigInt = boost::multiprecision::cpp_int;

/// Compact, canonical byte encoding used for hashing and for the element
/// arena inside a BallIndex. Encodings are unique per value: equal values
/// produce identical bytes.
class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }

    void uvarint(std::uint64_t v) {
        while (v >= 0x80) {
            out_.push_back(static_cast<std::uint8_t>(v) | 0x80);
            v >>= 7;
        }
        out_.push_back(static_cast<std::uint8_t>(v));
    }

    void svarint(std::int64_t v) {
        uvarint((static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63));
    }

    void bigint(const BigInt& v) {
        // Small values share the varint path; large ones are sign + magnitude
        // bytes. The two branches are disambiguated by a leading tag.
        if (v >= INT64_MIN / 2 && v <= INT64_MAX / 2) {
            u8(0);
            svarint(static_cast<std::int64_t>(v));
        } else {
            u8(v < 0 ? 2 : 1);
            BigInt mag = abs(v);
            std::vector<std::uint8_t> limbs;
            export_bits(mag, std::back_inserter(limbs), 8);
            uvarint(limbs.size());
            out_.insert(out_.end(), limbs.begin(), limbs.end());
        }
    }

private:
    std::vector<std::uint8_t>& out_;
};

class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t size) : p_(data), end_(data + size) {}

    bool done() const { return p_ == end_; }

    std::uint8_t u8() {
        if (p_ == end_) throw Error("byte stream truncated");
        return *p_++;
    }

    std::uint64_t uvarint() {
        std::uint64_t v = 0;
        int shift = 0;
        while (true) {
            std::uint8_t b = u8();
            v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
            if (!(b & 0x80)) return v;
            shift += 7;
            if (shift > 63) throw Error("varint overflow");
        }
    }

    std::int64_t svarint() {
        std::uint64_t raw = uvarint();
        return static_cast<std::int64_t>((raw >> 1) ^ (~(raw & 1) + 1));
    }

    BigInt bigint() {
        std::uint8_t tag = u8();
        if (tag == 0) return BigInt(svarint());
        std::size_t n = uvarint();
        if (static_cast<std::size_t>(end_ - p_) < n) throw Error("byte stream truncated");
        BigInt mag;
        import_bits(mag, p_, p_ + n, 8);
        p_ += n;
        return tag == 2 ? BigInt(-mag) : mag;
    }

private:
    const std::uint8_t* p_;
    const std::uint8_t* end_;
};

/// 64-bit FNV-1a. Keys are short (tens of bytes), so this is plenty fast and
/// well mixed for open addressing.
inline std::uint64_t hash_bytes(const std::uint8_t* data, std::size_t size) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    // final avalanche, FNV alone clusters low bits
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

std::string base64_encode(const std::uint8_t* data, std::size_t size);

} // namespace twist
