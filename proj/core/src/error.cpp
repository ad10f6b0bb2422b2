#include "qvrad/error.hpp"

namespace qvrad {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::InvalidProfile: return "invalid_profile";
    case ErrorCode::WrongVariant: return "wrong_variant";
    case ErrorCode::NotClosedForm: return "not_closed_form";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::Extent: return "extent";
    case ErrorCode::Accuracy: return "accuracy";
    case ErrorCode::UndefinedMean: return "undefined_mean";
    case ErrorCode::ZeroEffectiveSamples: return "zero_effective_samples";
    case ErrorCode::NoHorizon: return "no_horizon";
    case ErrorCode::DegenerateHorizon: return "degenerate_horizon";
    case ErrorCode::NoValidBoost: return "no_valid_boost";
    case ErrorCode::MissingArea: return "missing_area";
    case ErrorCode::UnsupportedTrajectory: return "unsupported_trajectory";
    case ErrorCode::Fit: return "fit";
    case ErrorCode::Lookup: return "lookup";
    case ErrorCode::Sweep: return "sweep";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorCode code, std::string const& message)
    : std::runtime_error(message), code_(code)
{
}

}  // namespace qvrad
