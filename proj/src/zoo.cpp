#include "krylab/zoo.hpp"

#include <cmath>
#include <random>
#include <set>

#include "krylab/error.hpp"

namespace krylab {

std::string to_string(ZooKind k) {
  switch (k) {
    case ZooKind::shift: return "shift";
    case ZooKind::weighted_shift: return "weighted_shift";
    case ZooKind::jordan: return "jordan";
    case ZooKind::diagonal: return "diagonal";
    case ZooKind::identity: return "identity";
    case ZooKind::random_ginibre: return "random_ginibre";
    case ZooKind::random_hessenberg: return "random_hessenberg";
    case ZooKind::from_file: return "from_file";
  }
  return "unknown";
}

const std::vector<ZooKind>& zoo_kinds() {
  static const std::vector<ZooKind> kinds{ZooKind::shift,          ZooKind::weighted_shift,
                                          ZooKind::jordan,         ZooKind::diagonal,
                                          ZooKind::identity,       ZooKind::random_ginibre,
                                          ZooKind::random_hessenberg, ZooKind::from_file};
  return kinds;
}

ZooKind parse_zoo_kind(const std::string& s) {
  for (ZooKind k : zoo_kinds())
    if (to_string(k) == s) return k;
  throw ConfigError("unknown zoo kind '" + s + "'");
}

namespace {

bool is_random(ZooKind k) { return k == ZooKind::random_ginibre || k == ZooKind::random_hessenberg; }

Complex complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

Operator make_operator(const ZooSpec& s) {
  const Eigen::Index n = s.n;
  switch (s.kind) {
    case ZooKind::shift: return Operator::shift(n);
    case ZooKind::weighted_shift: {
      if (static_cast<Eigen::Index>(s.weights.size()) != n - 1)
        throw DomainError("weighted_shift needs N-1 weights");
      Matrix m = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) m(i + 1, i) = s.weights[static_cast<std::size_t>(i)];
      return Operator(std::move(m));
    }
    case ZooKind::jordan: {
      Matrix m = Operator::shift(n).matrix();
      m.diagonal().setConstant(s.lambda);
      return Operator(std::move(m));
    }
    case ZooKind::diagonal:
      if (static_cast<Eigen::Index>(s.entries.size()) != n) throw DomainError("diagonal needs N entries");
      return Operator::diagonal(s.entries);
    case ZooKind::identity: return Operator::identity(n);
    case ZooKind::random_ginibre: {
      std::mt19937_64 rng(s.seed);
      Matrix m(n, n);
      const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = scale * complex_gaussian(rng);
      return Operator(std::move(m));
    }
    case ZooKind::random_hessenberg: {
      // Strictly positive subdiagonal makes e_1 cyclic by construction.
      std::mt19937_64 rng(s.seed);
      std::uniform_real_distribution<double> sub(0.5, 1.5);
      Matrix m = Matrix::Zero(n, n);
      const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= std::min(j, n - 1); ++i) m(i, j) = scale * complex_gaussian(rng);
        if (j + 1 < n) m(j + 1, j) = sub(rng);
      }
      return Operator(std::move(m));
    }
    case ZooKind::from_file: {
      Operator t = read_operator(s.path);
      if (t.dim() != n) throw DomainError("from_file: operator dimension differs from declared n");
      return t;
    }
  }
  throw ConfigError("unhandled zoo kind");
}

Vector make_vector(const ZooSpec& s) {
  const Eigen::Index n = s.n;
  switch (s.vector_kind) {
    case CyclicVectorKind::e1: return Vector::Unit(n, 0);
    case CyclicVectorKind::ones: return Vector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    case CyclicVectorKind::custom: {
      if (static_cast<Eigen::Index>(s.custom_vector.size()) != n)
        throw DomainError("custom cyclic vector must have N entries");
      Vector v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = s.custom_vector[static_cast<std::size_t>(i)];
      if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("custom cyclic vector must have unit norm");
      return v;
    }
  }
  throw ConfigError("unhandled cyclic vector kind");
}

}  // namespace

std::string default_id(const ZooSpec& spec) {
  std::string id = to_string(spec.kind) + std::to_string(spec.n);
  if (is_random(spec.kind)) id += "-s" + std::to_string(spec.seed);
  return id;
}

ZooInstance build(const ZooSpec& spec) {
  if (spec.n < 2) throw DomainError("zoo operators need N >= 2");
  return {spec.id.empty() ? default_id(spec) : spec.id, make_operator(spec), make_vector(spec)};
}

std::vector<ZooSpec> standard_zoo(int n) {
  std::vector<ZooSpec> zoo;
  zoo.push_back({.kind = ZooKind::shift, .n = n});
  ZooSpec weighted{.kind = ZooKind::weighted_shift, .n = n};
  for (int i = 1; i < n; ++i) weighted.weights.push_back(static_cast<double>(i % 3 + 1) / 3.0);
  zoo.push_back(weighted);
  zoo.push_back({.kind = ZooKind::jordan, .n = n, .lambda = {0.5, 0.0}});
  ZooSpec diag{.kind = ZooKind::diagonal, .n = n, .vector_kind = CyclicVectorKind::ones};
  for (int i = 1; i <= n; ++i) diag.entries.push_back(static_cast<double>(i));
  zoo.push_back(diag);
  zoo.push_back({.kind = ZooKind::random_ginibre, .n = n, .seed = 1});
  zoo.push_back({.kind = ZooKind::random_hessenberg, .n = n, .seed = 2});
  for (ZooSpec& z : zoo) z.id = default_id(z);
  return zoo;
}

std::vector<ZooSpec> zoo_specs_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("zoo entry must be an object");
  static const std::set<std::string> allowed{"id", "kind", "n", "weights", "entries", "lambda", "seed",
                                             "seeds", "path", "cyclic_vector"};
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("zoo entry: unknown key '" + key + "'");
  if (!j.contains("kind") || !j.contains("n")) throw ConfigError("zoo entry needs 'kind' and 'n'");

  ZooSpec spec;
  try {
    spec.kind = parse_zoo_kind(j.at("kind").get<std::string>());
    spec.n = j.at("n").get<int>();
    if (j.contains("id")) spec.id = j.at("id").get<std::string>();
    if (j.contains("weights")) spec.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("entries")) spec.entries = j.at("entries").get<std::vector<double>>();
    if (j.contains("lambda")) {
      const Json& l = j.at("lambda");
      spec.lambda = l.is_array() ? Complex(l.at(0).get<double>(), l.at(1).get<double>()) : Complex(l.get<double>(), 0.0);
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("path")) spec.path = j.at("path").get<std::string>();
    if (j.contains("cyclic_vector")) {
      const Json& cv = j.at("cyclic_vector");
      if (cv.is_string()) {
        const auto s = cv.get<std::string>();
        if (s == "e1") spec.vector_kind = CyclicVectorKind::e1;
        else if (s == "ones") spec.vector_kind = CyclicVectorKind::ones;
        else throw ConfigError("cyclic_vector must be \"e1\", \"ones\" or {\"re\": [...], \"im\": [...]}");
      } else {
        spec.vector_kind = CyclicVectorKind::custom;
        const auto re = cv.at("re").get<std::vector<double>>();
        const auto im = cv.contains("im") ? cv.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
        if (re.size() != im.size()) throw ConfigError("cyclic_vector: re and im differ in length");
        for (std::size_t i = 0; i < re.size(); ++i) spec.custom_vector.emplace_back(re[i], im[i]);
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("zoo entry: ") + e.what());
  }
  if (spec.n < 2) throw ConfigError("zoo entry: n must be >= 2");

  std::vector<ZooSpec> out;
  if (j.contains("seeds")) {
    if (!is_random(spec.kind)) throw ConfigError("zoo entry: 'seeds' only applies to random kinds");
    const Json& s = j.at("seeds");
    const auto start = s.at("start").get<std::uint64_t>();
    const auto count = s.at("count").get<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) {
      ZooSpec each = spec;
      each.seed = start + i;
      each.id = (spec.id.empty() ? to_string(spec.kind) + std::to_string(spec.n) : spec.id) + "-s" +
                std::to_string(each.seed);
      out.push_back(std::move(each));
    }
  } else {
    if (spec.id.empty()) spec.id = default_id(spec);
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace krylab
