#include "msn/error.hpp"

namespace msn {

std::string_view name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "Format";
    case ErrorKind::Io: return "Io";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::BadLength: return "BadLength";
    case ErrorKind::BadLevel: return "BadLevel";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::UnboundedPolyhedron: return "UnboundedPolyhedron";
    case ErrorKind::NotGraded: return "NotGraded";
    case ErrorKind::NotAnEmbedding: return "NotAnEmbedding";
    case ErrorKind::NotAnNEmbedding: return "NotAnNEmbedding";
    case ErrorKind::NotSeparated: return "NotSeparated";
    case ErrorKind::EpsNonPositive: return "EpsNonPositive";
    case ErrorKind::CatalogNotSeparated: return "CatalogNotSeparated";
    case ErrorKind::PairNotInCertificates: return "PairNotInCertificates";
    case ErrorKind::EmptyEmbeddingSet: return "EmptyEmbeddingSet";
    case ErrorKind::UndefinedPoint: return "UndefinedPoint";
    case ErrorKind::MultiLevelInput: return "MultiLevelInput";
    case ErrorKind::TowerMismatch: return "TowerMismatch";
  }
  return "Unknown";
}

bool is_mathematical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format:
    case ErrorKind::Io:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::ArityMismatch:
    case ErrorKind::LengthMismatch:
    case ErrorKind::BadLength:
    case ErrorKind::BadLevel:
      return false;
    default:
      return true;
  }
}

}  // namespace msn
