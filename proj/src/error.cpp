#include "slumber/error.hpp"

namespace slumber {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::RowOutOfWindow: return "RowOutOfWindow";
    case ErrorKind::FieldIdOutOfRange: return "FieldIdOutOfRange";
    case ErrorKind::ZeroCitations: return "ZeroCitations";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::EmptyEligibleSet: return "EmptyEligibleSet";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnresolvedFamily: return "UnresolvedFamily";
    case ErrorKind::NoPatentCitations: return "NoPatentCitations";
    case ErrorKind::InvalidCounts: return "InvalidCounts";
    case ErrorKind::DegeneratePool: return "DegeneratePool";
    case ErrorKind::ZeroBaseline: return "ZeroBaseline";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::AllDenominatorsZero: return "AllDenominatorsZero";
    case ErrorKind::ZeroBase: return "ZeroBase";
    case ErrorKind::UnmappedIpc: return "UnmappedIpc";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace slumber
