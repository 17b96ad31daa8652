#pragma once

#include <stdexcept>
#include <string>

namespace hocf {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct PositivityViolation : Error {
    using Error::Error;
};
struct ZeroParameter : Error {
    using Error::Error;
};
struct NotObservable : Error {
    using Error::Error;
};
struct ResolutionError : Error {
    using Error::Error;
};
struct WindowMismatch : Error {
    using Error::Error;
};
struct WindowTooShort : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct InsufficientTrace : Error {
    using Error::Error;
};
struct KernelDomainError : Error {
    using Error::Error;
};
struct GridTooCoarse : Error {
    using Error::Error;
};
struct SingularMarch : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct IOError : Error {
    using Error::Error;
};

}  // namespace hocf
