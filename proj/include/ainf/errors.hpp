#pragma once

#include <stdexcept>
#include <string>

namespace ainf {

/// Malformed input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematical precondition or identity failed; the message names a witness.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The series of a perturbation did not terminate within its bound.
class NilpotenceExceeded : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

/// A central element does not commute with a stored morphism component.
class CommutativityFailure : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

/// The proposed k[z]-basis does not freely generate the homology window.
class FreenessFailure : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

/// Multiplication by the proposed central element is not injective.
class TorsionFailure : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

}  // namespace ainf
