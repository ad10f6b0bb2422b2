#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qvrad {

//! Machine-readable failure categories. The CLI reports these verbatim in
//! its error JSON, so the spelling returned by to_string() is stable.
enum class ErrorCode {
    Domain,
    InvalidProfile,
    WrongVariant,
    NotClosedForm,
    Resolution,
    Extent,
    Accuracy,
    UndefinedMean,
    ZeroEffectiveSamples,
    NoHorizon,
    DegenerateHorizon,
    NoValidBoost,
    MissingArea,
    UnsupportedTrajectory,
    Fit,
    Lookup,
    Sweep,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& message);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace qvrad
