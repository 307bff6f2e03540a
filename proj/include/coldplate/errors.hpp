#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coldplate {

/// Root of every error raised by the library. Out-of-range cell indices use
/// std::out_of_range instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridError : public Error { using Error::Error; };
class GeometryError : public Error { using Error::Error; };
class SamplingError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class StateError : public Error { using Error::Error; };
class StatsError : public Error { using Error::Error; };
class LossError : public Error { using Error::Error; };
class SplitError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

class SolverError : public Error {
public:
    enum class Kind { Singular, NonConvergence };

    SolverError(Kind kind, const std::string& what, double last_residual = 0.0)
        : Error(what), kind_(kind), last_residual_(last_residual) {}

    Kind kind() const noexcept { return kind_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    Kind kind_;
    double last_residual_;
};

/// Malformed file content. offset is the byte position where parsing failed.
class FormatError : public Error {
public:
    FormatError(std::size_t offset, const std::string& what)
        : Error("format error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Training produced a non-finite loss. last_finite_epoch is 0 when the very
/// first epoch already diverged.
class DivergenceError : public Error {
public:
    DivergenceError(int last_finite_epoch, const std::string& what)
        : Error(what), last_finite_epoch_(last_finite_epoch) {}

    int last_finite_epoch() const noexcept { return last_finite_epoch_; }

private:
    int last_finite_epoch_;
};

}  // namespace coldplate
