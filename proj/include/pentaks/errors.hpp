#pragma once

#include <stdexcept>
#include <string>

namespace pentaks {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Polynomial has genuinely complex roots.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two rays (or a set of rays) are too close to parallel for a complement to exist.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Family parameters with sin^2(a) sin^2(b) = 1.
class SingularFamilyError : public Error {
public:
    using Error::Error;
};

/// Operator whose top eigenvalue does not exceed the classical bound.
class NoViolationError : public Error {
public:
    using Error::Error;
};

/// Hardy construction with the upper vector orthogonal to the outlier.
class CollapseError : public Error {
public:
    using Error::Error;
};

/// Multi-start search exhausted its restart budget.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Operation requested on a graph that has no structure it can act on.
class NotApplicableError : public Error {
public:
    using Error::Error;
};

} // namespace pentaks
