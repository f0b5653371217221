#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlab {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define QLAB_DEFINE_ERROR(Name, tag)                                  \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(tag, what) {}      \
  }

QLAB_DEFINE_ERROR(InvalidElement, "invalid-element");
QLAB_DEFINE_ERROR(InvalidSubgroup, "invalid-subgroup");
QLAB_DEFINE_ERROR(InvalidHomomorphism, "invalid-homomorphism");
QLAB_DEFINE_ERROR(NotAnAutomorphism, "not-an-automorphism");
QLAB_DEFINE_ERROR(GroupTooLarge, "group-too-large");
QLAB_DEFINE_ERROR(InvalidArgument, "invalid-argument");
QLAB_DEFINE_ERROR(GroupMismatch, "group-mismatch");
QLAB_DEFINE_ERROR(InvalidDistribution, "invalid-distribution");
QLAB_DEFINE_ERROR(WindowExhausted, "window-exhausted");
QLAB_DEFINE_ERROR(UndefinedLog, "undefined-log");
QLAB_DEFINE_ERROR(HypothesisViolated, "hypothesis-violated");
QLAB_DEFINE_ERROR(TheoremViolated, "theorem-violated");
QLAB_DEFINE_ERROR(PremiseViolated, "premise-violated");
QLAB_DEFINE_ERROR(ConstructionRejected, "construction-rejected");
QLAB_DEFINE_ERROR(NumericalInconsistency, "numerical-inconsistency");

#undef QLAB_DEFINE_ERROR

/// Raised by inverse transforms when the input is not positive definite.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(double mass, std::vector<std::int64_t> location,
                      const std::string& what)
      : Error("not-positive-definite", what),
        mass_(mass),
        location_(std::move(location)) {}
  double mass() const noexcept { return mass_; }
  const std::vector<std::int64_t>& location() const noexcept {
    return location_;
  }

 private:
  double mass_;
  std::vector<std::int64_t> location_;
};

/// Input document does not match its schema. `path` points at the
/// offending field, e.g. "scenarios[2].payload.group.orders".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error("schema", path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qlab
