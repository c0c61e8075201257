#pragma once

#include "msn/linear_map.hpp"
#include "msn/space.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace msn {

// Where the domain of a sampled pair comes from.
struct SourceRef {
  bool catalog = true;  // catalog member or earlier stage
  std::size_t index = 0;
  friend bool operator==(const SourceRef&, const SourceRef&) = default;
};

enum class DischargeMethod { Link, Automorphism, Amalgam };
std::string_view name(DischargeMethod m);

// One instance of the extension condition discharged from stage n:
// gamma, eta: X -> X_n are delta-embeddings and j: X_n -> X_{n+1} satisfies
// ||I_n∘gamma - j∘eta||_l <= bound for every level l of X.
struct PairRecord {
  SourceRef source;
  std::size_t delta_index = 0;
  LinearMap gamma, eta, j;
  std::vector<Rational> values;
  Rational bound;
  DischargeMethod method = DischargeMethod::Link;
  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct SkippedPair {
  SourceRef source;
  std::size_t delta_index = 0;
  LinearMap gamma, eta;
  std::string reason;
  friend bool operator==(const SkippedPair&, const SkippedPair&) = default;
};

// Extra pair to discharge at a given stage, on top of the seeded sample.
struct RequestedPair {
  std::size_t stage = 0;
  SourceRef source;
  std::size_t delta_index = 0;
  Matrix gamma, eta;
};

struct TowerOptions {
  std::size_t stages = 3;             // number of spaces X_0 .. X_{stages-1}
  std::vector<Rational> deltas{Rational(0)};
  std::uint64_t seed = 0;
  bool omega = false;
  std::size_t pairs_per_stage = 3;
  // Pushouts are only formed while the next stage stays within this dimension;
  // pairs beyond it are recorded as skipped.
  std::size_t max_dim = 8;
  std::size_t max_automorphisms = 96;
  bool sphere_pairs = true;  // random unit-sphere embeddings of 1-dimensional sources
  std::vector<RequestedPair> requested;
};

struct Tower {
  std::vector<MultiSpace> catalog;
  std::vector<Rational> deltas;
  bool omega = false;
  std::uint64_t seed = 0;
  std::vector<MultiSpace> stages;
  std::vector<LinearMap> links;  // links[n]: X_n -> X_{n+1}
  // certificates[n]: pairs discharged from X_n into X_{n+1}
  std::vector<std::vector<PairRecord>> certificates;
  std::vector<std::vector<SkippedPair>> skipped;
  // embeddings[n][m]: an exact embedding Z_m -> X_n
  std::vector<std::vector<LinearMap>> embeddings;

  // I_{m,n}: X_m -> X_n.
  LinearMap composite(std::size_t m, std::size_t n) const;
  const MultiSpace& source_space(const SourceRef& s) const;

  friend bool operator==(const Tower&, const Tower&) = default;
};

Tower build_tower(const std::vector<MultiSpace>& catalog, const TowerOptions& opts);

// Signed permutation matrices P with ||P x||_{y,l} = ||x||_{x,l} for every
// level l of x (so x -> y is an exact embedding); identity first when x == y.
std::vector<Matrix> signed_permutation_isometries(const MultiSpace& x, const MultiSpace& y, std::size_t limit);

struct DischargeResult {
  std::size_t stage = 0;
  LinearMap j;
  Rational value;  // exact max_l ||I_n∘gamma - j∘eta||_l
  Rational bound;
};

// Throws NotAnEmbedding when gamma or eta is not a delta-embedding and
// PairNotInCertificates when no record matches.
DischargeResult discharge(const Tower& t, const MultiSpace& x, const LinearMap& gamma, const LinearMap& eta,
                          const Rational& delta);

struct TowerCheck {
  std::string kind;  // link, composite, certificate, length, separation, embedding
  std::size_t stage = 0;
  std::size_t item = 0;
  bool ok = true;
  std::string detail;
  nlohmann::json witness;
};

struct TowerReport {
  bool ok = true;
  std::vector<TowerCheck> checks;
  std::size_t certificates = 0;
  std::size_t skipped = 0;
  Rational max_certificate;
  std::vector<TowerCheck> failures() const;
};

TowerReport verify_tower(const Tower& t);

// A check of one recorded quantity against its closed-form bound.
struct Deviation {
  std::string kind;  // iv, v, vi, gap, tail
  std::size_t s = 0;
  std::size_t t = 0;
  Rational value;
  Rational bound;
  bool generators_ok = true;  // the bound also holds on every stage generator
  bool ok() const { return value <= bound && generators_ok; }
};

// j[s]: A_{n+2s} -> B_{n+2s+1}, l[s]: B_{n+2s+1} -> A_{n+2s+2}.
struct BackForthRecord {
  std::size_t start = 0;
  std::size_t steps = 0;
  std::vector<LinearMap> j, l;
  std::vector<Deviation> deviations;
  bool complete = false;
  std::string reason;
  bool ok() const;
};

BackForthRecord back_and_forth(const Tower& a, const Tower& b, std::size_t start, std::size_t steps,
                               std::size_t max_isometries = 96);

nlohmann::json to_json(const TowerReport& r);
nlohmann::json to_json(const BackForthRecord& r);

void save_tower(const Tower& t, const std::filesystem::path& dir);
Tower load_tower(const std::filesystem::path& dir);

}  // namespace msn
