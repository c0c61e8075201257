#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace msn {

enum class ErrorKind {
  // input / plumbing
  Format,
  Io,
  DimensionMismatch,
  ShapeMismatch,
  ArityMismatch,
  LengthMismatch,
  BadLength,
  BadLevel,
  // linear programming and polytopes
  Infeasible,
  Unbounded,
  UnboundedPolyhedron,
  // mathematical failures that carry a witness
  NotGraded,
  NotAnEmbedding,
  NotAnNEmbedding,
  NotSeparated,
  EpsNonPositive,
  CatalogNotSeparated,
  PairNotInCertificates,
  EmptyEmbeddingSet,
  UndefinedPoint,
  MultiLevelInput,
  TowerMismatch,
};

std::string_view name(ErrorKind kind);

// True for failures of a mathematical precondition (CLI exit code 2); false for
// malformed input or I/O problems (exit code 1).
bool is_mathematical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, nlohmann::json witness = nullptr)
      : std::runtime_error(message), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::json& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  nlohmann::json witness_;
};

}  // namespace msn
