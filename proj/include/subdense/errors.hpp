#pragma once

#include <stdexcept>
#include <string>

namespace subdense {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The model violates an integrability or monotonicity requirement.
class ModelInvalidError : public Error {
public:
    using Error::Error;
};

/// Malformed model/profile document (JSON); `field` names the offending key.
class SpecFormatError : public Error {
public:
    SpecFormatError(const std::string& field, const std::string& what)
        : Error("model spec field '" + field + "': " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A computed quantity violated an identity the theory guarantees (sign
/// pattern, bracket, ...). Indicates the engine itself broke.
class NumericalIntegrityError : public Error {
public:
    using Error::Error;
};

/// A theorem's hypotheses are not met for this model, so the requested
/// estimate does not apply.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Point lies outside the support interior (x <= t*b).
class SupportError : public Error {
public:
    using Error::Error;
};

/// Argument outside the operation's admissible range.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace subdense
