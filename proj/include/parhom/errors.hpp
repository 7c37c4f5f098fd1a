#pragma once

#include <stdexcept>
#include <string>

namespace parhom {

struct OutOfDomainError : std::runtime_error {
    explicit OutOfDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct NonInvertibleError : std::runtime_error {
    explicit NonInvertibleError(const std::string& what) : std::runtime_error(what) {}
};

struct NonSPDCoefficientError : std::runtime_error {
    explicit NonSPDCoefficientError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateReferenceError : std::runtime_error {
    explicit DegenerateReferenceError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace parhom
