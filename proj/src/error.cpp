#include "mrsim/error.hpp"

namespace mrsim {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidKnots: return "InvalidKnots";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::InvalidValue: return "InvalidValue";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::DegenerateTangent: return "DegenerateTangent";
        case ErrorKind::InvalidStep: return "InvalidStep";
        case ErrorKind::InvalidVessel: return "InvalidVessel";
        case ErrorKind::InvalidPath: return "InvalidPath";
        case ErrorKind::InvalidMoment: return "InvalidMoment";
        case ErrorKind::InvalidRiseTime: return "InvalidRiseTime";
        case ErrorKind::InvalidSeries: return "InvalidSeries";
        case ErrorKind::ImpossibleGeometry: return "ImpossibleGeometry";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::WriteError: return "WriteError";
        case ErrorKind::PlotError: return "PlotError";
        case ErrorKind::NumericalDivergence: return "NumericalDivergence";
    }
    return "UnknownError";
}

}  // namespace mrsim
