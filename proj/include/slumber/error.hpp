#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slumber {

enum class ErrorKind {
  // ingest
  DuplicateId,
  MalformedRow,
  MissingColumn,
  RowOutOfWindow,
  FieldIdOutOfRange,
  // curve
  ZeroCitations,
  SeriesTooShort,
  // cohort
  EmptyEligibleSet,
  InvalidConfig,
  // patent
  UnresolvedFamily,
  NoPatentCitations,
  // stats
  InvalidCounts,
  DegeneratePool,
  ZeroBaseline,
  InsufficientData,
  AllDenominatorsZero,
  ZeroBase,
  // interact
  UnmappedIpc,
  // environment
  Io,
};

std::string_view to_string(ErrorKind kind);

/// All data-level failures raised by the library. `kind()` identifies the
/// failure class; `what()` carries the offending id, line or value.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace slumber
