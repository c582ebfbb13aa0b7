#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "krylab/io.hpp"
#include "krylab/operator.hpp"

namespace krylab {

enum class ZooKind {
  shift,
  weighted_shift,
  jordan,
  diagonal,
  identity,
  random_ginibre,
  random_hessenberg,
  from_file,
};

std::string to_string(ZooKind k);
ZooKind parse_zoo_kind(const std::string& s);
const std::vector<ZooKind>& zoo_kinds();

enum class CyclicVectorKind { e1, ones, custom };

/// Recipe for one test operator and its designated cyclic vector.
struct ZooSpec {
  std::string id;  // defaults to "<kind><N>" (plus "-s<seed>" for random kinds)
  ZooKind kind = ZooKind::shift;
  int n = 2;
  std::vector<double> weights;  // weighted_shift: T e_i = w_i e_{i+1}, length N-1
  std::vector<double> entries;  // diagonal: length N
  Complex lambda{0.0, 0.0};     // jordan: lambda I + shift
  std::uint64_t seed = 0;       // random kinds
  std::string path;             // from_file
  CyclicVectorKind vector_kind = CyclicVectorKind::e1;
  std::vector<Complex> custom_vector;
};

struct ZooInstance {
  std::string id;
  Operator t;
  Vector v;  // unit vector
};

/// Builds (T, v). Random kinds are fully determined by their seed.
/// Throws DomainError for N < 2, mis-sized parameters or a non-unit custom
/// vector, and propagates file/parse errors for from_file.
ZooInstance build(const ZooSpec& spec);

std::string default_id(const ZooSpec& spec);

/// The fixed family used by the structural checks: shift, weighted shift,
/// jordan(1/2), diagonal(1..N) with the ones vector, seeded Ginibre and
/// seeded random Hessenberg.
std::vector<ZooSpec> standard_zoo(int n);

/// Parses one zoo entry. Unknown keys are errors. A "seeds": {"start", "count"}
/// entry on a random kind expands into several specs.
std::vector<ZooSpec> zoo_specs_from_json(const Json& j);

}  // namespace krylab
