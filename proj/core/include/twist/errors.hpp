#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace twist {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two values built against different group specs were mixed in one operation.
class SpecMismatchError : public Error {
public:
    explicit SpecMismatchError(const std::string& what) : Error(what) {}
};

/// A structurally invalid argument (empty alphabet, genset not closed under
/// inversion, malformed spelling, ...).
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

/// A bounded search (window / cap / max_bound) ran out of room before finding
/// what it was asked for. Distinct from mathematical nonexistence.
class BoundedSearchExhausted : public Error {
public:
    explicit BoundedSearchExhausted(const std::string& what) : Error(what) {}
};

/// A ball index is too small to support the requested measurement.
class InsufficientRadiusError : public Error {
public:
    InsufficientRadiusError(const std::string& what, std::int64_t required)
        : Error(what), required_radius(required) {}
    std::int64_t required_radius;
};

/// A hard resource cap (element count or byte budget) was hit. Carries the
/// progress made so partial statistics can be reported instead of lost.
class ResourceLimitError : public Error {
public:
    ResourceLimitError(const std::string& what, std::uint64_t stored,
                       std::int64_t completed_radius)
        : Error(what), elements_stored(stored), last_complete_radius(completed_radius) {}
    std::uint64_t elements_stored;
    std::int64_t last_complete_radius;
};

/// Configuration file problems (unknown keys, missing fields, bad values).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace twist
