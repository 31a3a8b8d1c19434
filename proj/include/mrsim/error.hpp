#ifndef MRSIM_ERROR_HPP
#define MRSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mrsim {

enum class ErrorKind {
    InvalidKnots,
    InsufficientData,
    InvalidValue,
    OutOfDomain,
    DegenerateTangent,
    InvalidStep,
    InvalidVessel,
    InvalidPath,
    InvalidMoment,
    InvalidRiseTime,
    InvalidSeries,
    ImpossibleGeometry,
    ConfigError,
    WriteError,
    PlotError,
    NumericalDivergence,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace mrsim

#endif
