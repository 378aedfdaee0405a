#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscpert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::size_t iterations)
        : Error(what), iterations_(iterations) {}
    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

class NotDiagonalizable : public Error {
public:
    using Error::Error;
};

class SingularTransform : public Error {
public:
    using Error::Error;
};

class NotSymmetrizable : public Error {
public:
    NotSymmetrizable(const std::string& what, std::vector<std::size_t> cycle)
        : Error(what), cycle_(std::move(cycle)) {}
    /// Node sequence of a closed path whose weight products do not balance.
    const std::vector<std::size_t>& witness_cycle() const noexcept { return cycle_; }

private:
    std::vector<std::size_t> cycle_;
};

class InvalidDecomposition : public Error {
public:
    using Error::Error;
};

class ResolutionTooCoarse : public Error {
public:
    using Error::Error;
};

class DegenerateFrequencies : public Error {
public:
    using Error::Error;
};

class MaxTermsExceeded : public Error {
public:
    MaxTermsExceeded(const std::string& what, std::complex<double> partial,
                     std::complex<double> last_term)
        : Error(what), partial_(partial), last_term_(last_term) {}
    std::complex<double> partial() const noexcept { return partial_; }
    std::complex<double> last_term() const noexcept { return last_term_; }

private:
    std::complex<double> partial_;
    std::complex<double> last_term_;
};

class InvalidLowerParameter : public Error {
public:
    using Error::Error;
};

class TruncationNotConverged : public Error {
public:
    using Error::Error;
};

class NoTransition : public Error {
public:
    using Error::Error;
};

class UnknownModel : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace oscpert
