#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lzdeg {

/// Base of every error thrown by the library. `kind()` is a stable,
/// machine-readable tag (used on the CLI's stderr error line).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LZDEG_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  };

// model
LZDEG_DEFINE_ERROR(DegenerateModel)
LZDEG_DEFINE_ERROR(BadInterval)
LZDEG_DEFINE_ERROR(BadCutoff)
// oscquad
LZDEG_DEFINE_ERROR(GridTooLarge)
LZDEG_DEFINE_ERROR(ToleranceNotMet)
// statphase
LZDEG_DEFINE_ERROR(NotDegenerate)
LZDEG_DEFINE_ERROR(ExtraStationaryPoint)
LZDEG_DEFINE_ERROR(ContactOrderTooLow)
LZDEG_DEFINE_ERROR(PreconditionViolation)
// solver
LZDEG_DEFINE_ERROR(GridTooCoarse)
LZDEG_DEFINE_ERROR(SeriesDiverging)
LZDEG_DEFINE_ERROR(StepUnderflow)
LZDEG_DEFINE_ERROR(IllConditioned)
LZDEG_DEFINE_ERROR(RegimeViolation)
LZDEG_DEFINE_ERROR(SingularT22)
// harness / cli
LZDEG_DEFINE_ERROR(ConfigError)
LZDEG_DEFINE_ERROR(InsufficientData)
LZDEG_DEFINE_ERROR(ParseError)

#undef LZDEG_DEFINE_ERROR

/// Carries the offending config field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error("ValidationError", field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace lzdeg
