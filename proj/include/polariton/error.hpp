#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace polariton {

// Invalid physical input: non-positive frequency, unstable parameters, bad geometry.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Lossless system evaluated exactly at one of its resonances.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw DomainError(what);
}

inline void require_finite(double v, const char* name)
{
    if (!std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite");
}

} // namespace detail
} // namespace polariton
