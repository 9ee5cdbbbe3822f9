#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace heatbeam {

/// Groups errors by what the caller can do about them; the CLI maps each
/// family to its own exit code.
enum class ErrorFamily {
  Config,      // bad input: fix the configuration
  Assumption,  // controller assumptions or certificate failed
  Numerical,   // a computation could not be completed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorFamily family, const std::string& what)
      : std::runtime_error(what), family_(family) {}
  ErrorFamily family() const noexcept { return family_; }

 private:
  ErrorFamily family_;
};

struct ParameterViolation {
  enum class Kind { Missing, NonPositive, Negative, Inconsistent };
  Kind kind;
  std::string name;
};

class InvalidParameters : public Error {
 public:
  explicit InvalidParameters(std::vector<ParameterViolation> violations);
  const std::vector<ParameterViolation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<ParameterViolation> violations_;
};

#define HEATBEAM_DEFINE_ERROR(Name, Family)                           \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what)                            \
        : Error(ErrorFamily::Family, std::string(#Name ": ") + what) {} \
  }

HEATBEAM_DEFINE_ERROR(ParseError, Config);
HEATBEAM_DEFINE_ERROR(UnknownKey, Config);
HEATBEAM_DEFINE_ERROR(InvalidController, Config);
HEATBEAM_DEFINE_ERROR(NTooSmall, Config);
HEATBEAM_DEFINE_ERROR(IndexOutOfRange, Config);
HEATBEAM_DEFINE_ERROR(DeltaOutOfRange, Config);
HEATBEAM_DEFINE_ERROR(DimensionMismatch, Config);
HEATBEAM_DEFINE_ERROR(EmptyFeasibleSet, Config);
HEATBEAM_DEFINE_ERROR(InvalidRun, Config);

HEATBEAM_DEFINE_ERROR(AssumptionsFailed, Assumption);
HEATBEAM_DEFINE_ERROR(PreconditionViolation, Assumption);
HEATBEAM_DEFINE_ERROR(FactorizationFailed, Assumption);
HEATBEAM_DEFINE_ERROR(MissingCertificate, Assumption);
HEATBEAM_DEFINE_ERROR(CertificateRequired, Assumption);

HEATBEAM_DEFINE_ERROR(SingularSolve, Numerical);
HEATBEAM_DEFINE_ERROR(ConstraintProjectionFailed, Numerical);
HEATBEAM_DEFINE_ERROR(NonpositiveEnergy, Numerical);
HEATBEAM_DEFINE_ERROR(WindowTooShort, Numerical);

#undef HEATBEAM_DEFINE_ERROR

inline std::string describe(const ParameterViolation& v) {
  switch (v.kind) {
    case ParameterViolation::Kind::Missing:
      return "MissingParameter(" + v.name + ")";
    case ParameterViolation::Kind::NonPositive:
      return "NonPositiveParameter(" + v.name + ")";
    case ParameterViolation::Kind::Negative:
      return "NegativeParameter(" + v.name + ")";
    case ParameterViolation::Kind::Inconsistent:
      return "InconsistentParameter(" + v.name + ")";
  }
  return v.name;
}

inline std::string join_violations(const std::vector<ParameterViolation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += ", ";
    out += describe(v);
  }
  return out;
}

inline InvalidParameters::InvalidParameters(
    std::vector<ParameterViolation> violations)
    : Error(ErrorFamily::Config,
            "InvalidParameters: " + join_violations(violations)),
      violations_(std::move(violations)) {}

}  // namespace heatbeam
