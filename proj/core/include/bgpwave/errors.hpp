#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bgpwave {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Array length does not match the grid it is supposed to live on.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Index range is outside the grid.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Invalid model parameter or grid shape.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Model parameters outside the regime where an equation is well posed.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Zero (or near-zero) pivot during tridiagonal elimination.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& msg, int row)
        : Error(msg), row_(row) {}
    int row() const noexcept { return row_; }

private:
    int row_;
};

/// The speed residual has no sign change anywhere in the search bracket.
class NoWaveError : public Error {
public:
    NoWaveError(const std::string& msg, double residual_lo, double residual_hi)
        : Error(msg), residual_lo_(residual_lo), residual_hi_(residual_hi) {}
    double residual_lo() const noexcept { return residual_lo_; }
    double residual_hi() const noexcept { return residual_hi_; }

private:
    double residual_lo_;
    double residual_hi_;
};

/// Iteration cap exceeded. Carries the residual history and the last iterate.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& msg,
                        std::vector<double> residual_history = {},
                        std::vector<double> last_profile = {},
                        double last_speed = 0.0)
        : Error(msg),
          residual_history_(std::move(residual_history)),
          last_profile_(std::move(last_profile)),
          last_speed_(last_speed) {}

    const std::vector<double>& residual_history() const noexcept { return residual_history_; }
    const std::vector<double>& last_profile() const noexcept { return last_profile_; }
    double last_speed() const noexcept { return last_speed_; }

private:
    std::vector<double> residual_history_;
    std::vector<double> last_profile_;
    double last_speed_;
};

/// Not enough positive tail values to fit a decay rate.
class TailWindowError : public Error {
public:
    using Error::Error;
};

/// File I/O failure; message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace bgpwave
