#pragma once

#include <stdexcept>
#include <string>

namespace qtails {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- series errors ---
struct ZeroSeries : Error {
    explicit ZeroSeries(const std::string& w = "operation undefined on the zero series") : Error(w) {}
};
struct NonUnitLeadingCoefficient : Error {
    explicit NonUnitLeadingCoefficient(const std::string& w) : Error(w) {}
};
struct DivergentProduct : Error {
    explicit DivergentProduct(const std::string& w) : Error(w) {}
};
struct OutOfRange : Error {
    explicit OutOfRange(const std::string& w) : Error(w) {}
};
struct TruncationExceeded : Error {
    explicit TruncationExceeded(const std::string& w) : Error(w) {}
};
struct Overflow : Error {
    explicit Overflow(const std::string& w = "int64 accumulator overflow") : Error(w) {}
};

// --- diagram errors ---
struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(w) {}
};
struct NotAlternating : Error {
    explicit NotAlternating(const std::string& w) : Error(w) {}
};
struct NotConnected : Error {
    explicit NotConnected(const std::string& w) : Error(w) {}
};
struct NotReduced : Error {
    explicit NotReduced(const std::string& w) : Error(w) {}
};
struct ColoringInconsistent : Error {
    explicit ColoringInconsistent(const std::string& w) : Error(w) {}
};
struct VInfNotAFace : Error {
    explicit VInfNotAFace(const std::string& w) : Error(w) {}
};
struct TooLarge : Error {
    explicit TooLarge(const std::string& w) : Error(w) {}
};

// --- enumeration / nahm errors ---
struct BoundTooLarge : Error {
    explicit BoundTooLarge(const std::string& w) : Error(w) {}
};
struct RegularityViolation : Error {
    explicit RegularityViolation(const std::string& w) : Error(w) {}
};

// --- jones / stability errors ---
struct WidthMismatch : Error {
    explicit WidthMismatch(const std::string& w) : Error(w) {}
};
struct NotStabilized : Error {
    explicit NotStabilized(const std::string& w) : Error(w) {}
};

// --- table / cli errors ---
struct UnknownKnot : Error {
    explicit UnknownKnot(const std::string& w) : Error(w) {}
};

} // namespace qtails
