#include "krylab/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "krylab/enorm.hpp"
#include "krylab/error.hpp"

namespace krylab {

namespace {

constexpr double kBoxSlack = 1e-12;

// Running minimum of slacks; `index` is 0 for the AE_1 = 0 condition and the
// loop index (s or n) otherwise, so labels are only formatted once.
struct Slack {
  double value = std::numeric_limits<double>::infinity();
  int index = -1;

  void consider(double v, int idx) {
    if (v < value) {
      value = v;
      index = idx;
    }
  }
};

std::string a_label(int idx) {
  if (idx <= 0) return "AE_1=0";
  std::ostringstream out;
  out << "s=" << idx << ":a_" << idx + 1 << ">=1/2";
  return out.str();
}

std::string b_label(int idx) {
  if (idx <= 0) return "AE_1=0";
  std::ostringstream out;
  out << "n=" << idx << ":1/2 in sigma(AE_n)";
  return out.str();
}

std::string f_label(int idx) {
  std::ostringstream out;
  out << "s=" << idx;
  return out.str();
}

MembershipVerdict finish(const Slack& s, double tol, std::string (*label)(int)) {
  return {s.value >= -tol, s.value, s.index < 0 ? std::string("none") : label(s.index)};
}

Slack a_slack(const DiagonalElement& d, Window w) {
  Slack slack;
  slack.consider(0.0 - d.at(1), 0);
  for (int s = w.k; s <= w.l && s + 1 <= d.dim(); ++s) slack.consider(d.at(s + 1) - 0.5, s);
  return slack;
}

Slack b_slack(const DiagonalElement& d, Window w) {
  Slack slack;
  slack.consider(0.0 - d.at(1), 0);
  // sigma(A E_n) = {a_1, ..., a_n, 0}; the distance from 1/2 can only shrink as n grows.
  double nearest = std::numeric_limits<double>::infinity();
  for (int i = 1; i < w.k; ++i) nearest = std::min(nearest, std::abs(d.at(i) - 0.5));
  for (int n = w.k; n <= w.l; ++n) {
    nearest = std::min(nearest, std::abs(d.at(n) - 0.5));
    slack.consider(0.0 - nearest, n);
  }
  return slack;
}

Slack f_slack(double lhs, Window w, std::span<const double> defects) {
  Slack slack;
  for (int s = w.k; s <= w.l; ++s) slack.consider(defects[static_cast<std::size_t>(s - 1)] - lhs, s);
  return slack;
}

}  // namespace

namespace detail {

double a_margin(const DiagonalElement& d, Window w) { return a_slack(d, w).value; }
double b_margin(const DiagonalElement& d, Window w) { return b_slack(d, w).value; }
double f_margin(double lhs, Window w, std::span<const double> defects) {
  return f_slack(lhs, w, defects).value;
}

}  // namespace detail

namespace {

void require_dim(const DiagonalElement& d, const KrylovForm& form) {
  if (d.dim() != form.dim()) throw DimensionError("diagonal element and Krylov form differ in dimension");
}

}  // namespace

std::string to_string(Window w) {
  std::ostringstream out;
  out << "(" << w.k << "," << w.l << ")";
  return out.str();
}

void validate_window(Window w, Eigen::Index n, bool allow_degenerate) {
  const Eigen::Index max_l = allow_degenerate ? n : n - 1;
  if (w.k < 1 || w.k > w.l || w.l > max_l) {
    std::ostringstream msg;
    msg << "window " << to_string(w) << " invalid at N = " << n << " (need 1 <= k <= l <= " << max_l
        << ")";
    throw DomainError(msg.str());
  }
}

std::vector<Window> all_windows(Eigen::Index n, bool include_degenerate) {
  const int max_l = static_cast<int>(include_degenerate ? n : n - 1);
  std::vector<Window> out;
  for (int k = 1; k <= max_l; ++k)
    for (int l = k; l <= max_l; ++l) out.push_back({k, l});
  return out;
}

std::vector<Window> diagonal_windows(Eigen::Index n, bool include_degenerate) {
  const int max_l = static_cast<int>(include_degenerate ? n : n - 1);
  std::vector<Window> out;
  for (int k = 1; k <= max_l; ++k) out.push_back({k, k});
  return out;
}

DiagonalElement::DiagonalElement(std::vector<double> a) : a_(std::move(a)) {
  if (a_.empty()) throw DimensionError("diagonal element must have at least one entry");
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (!(a_[i] >= -kBoxSlack && a_[i] <= 1.0 + kBoxSlack)) {
      std::ostringstream msg;
      msg << "diagonal entry a_" << i + 1 << " = " << a_[i] << " outside [0, 1]";
      throw DomainError(msg.str());
    }
  }
}

DiagonalElement DiagonalElement::zero(Eigen::Index n) {
  return DiagonalElement(std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

Operator embed(const DiagonalElement& d) { return Operator::diagonal(d.values()); }

DiagonalElement witness(Window w, Eigen::Index n) {
  validate_window(w, n, /*allow_degenerate=*/true);
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  const int top = std::min<int>(w.l + 1, static_cast<int>(n));
  for (int i = w.k + 1; i <= top; ++i) a[static_cast<std::size_t>(i - 1)] = 0.5;
  return DiagonalElement(std::move(a));
}

MembershipVerdict in_A(const DiagonalElement& d, Window w, double tol) {
  validate_window(w, d.dim(), true);
  return finish(a_slack(d, w), tol, a_label);
}

MembershipVerdict in_B(const DiagonalElement& d, Window w, double tol) {
  validate_window(w, d.dim(), true);
  return finish(b_slack(d, w), tol, b_label);
}

namespace detail {

FSideEvaluator::FSideEvaluator(const KrylovForm& form)
    : n_(static_cast<int>(form.dim())), weighted_(form.dim(), form.dim()) {
  for (int j = 1; j <= n_; ++j)
    for (int i = 1; i <= n_; ++i) weighted_(i - 1, j - 1) = enorm_weight(i, j) * std::abs(form.h(i - 1, j - 1));
}

double FSideEvaluator::operator()(const DiagonalElement& d, int k) const {
  if (d.dim() != n_) throw DimensionError("diagonal element and Krylov form differ in dimension");
  if (k < 1 || k > n_) throw DomainError("f_side_value: k out of range");
  // (A E_k H E_k A - H E_k A)(i, j) = H(i, j) a_j ([i <= k] a_i - 1) for j <= k, zero otherwise.
  // Summed in the e-norm order: increasing i + j, then increasing i.
  double sum = 0.0;
  for (int diag = 2; diag <= n_ + k; ++diag) {
    const int i_lo = std::max(1, diag - k);
    const int i_hi = std::min(n_, diag - 1);
    for (int i = i_lo; i <= i_hi; ++i) {
      const int j = diag - i;
      const double left = std::abs((i <= k ? d.at(i) : 0.0) - 1.0);
      sum += weighted_(i - 1, j - 1) * (std::abs(d.at(j)) * left);
    }
  }
  return sum;
}

}  // namespace detail

double f_side_value(const DiagonalElement& d, int k, const KrylovForm& form) {
  require_dim(d, form);
  return detail::FSideEvaluator(form)(d, k);
}

std::vector<double> defect_profile(const KrylovForm& form) {
  const int n = static_cast<int>(form.dim());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int s = 1; s <= n; ++s) out.push_back(compression_defect(form, s).value);
  return out;
}

MembershipVerdict f_verdict(double lhs, Window w, std::span<const double> defects, double tol) {
  validate_window(w, static_cast<Eigen::Index>(defects.size()), true);
  return finish(f_slack(lhs, w, defects), tol, f_label);
}

MembershipVerdict in_F(const DiagonalElement& d, Window w, const KrylovForm& form, double tol) {
  require_dim(d, form);
  validate_window(w, form.dim(), true);
  return f_verdict(f_side_value(d, w.k, form), w, defect_profile(form), tol);
}

Operator phi_k(const Operator& b, int k) { return projection(k, b.dim()) * b; }

Operator psi_k(const Operator& b, int k, const KrylovForm& form) {
  if (b.dim() != form.dim()) throw DimensionError("psi_k: operator and Krylov form differ in dimension");
  const Operator ek = projection(k, b.dim());
  const Operator hek = form.h * ek;
  return b * ek * hek * b - hek * b;
}

InclusionReport check_inclusion(SetFamily family, Window first, Window second,
                                const KrylovForm& form, int samples, std::uint64_t seed,
                                double tol) {
  const Eigen::Index n = form.dim();
  validate_window(first, n, true);
  validate_window(second, n, true);
  if (samples < 0) throw DomainError("check_inclusion: samples must be nonnegative");

  const std::vector<double> defects =
      family == SetFamily::F ? defect_profile(form) : std::vector<double>{};
  const detail::FSideEvaluator lhs(form);
  const auto member_of = [&](const DiagonalElement& d, Window w) {
    if (family == SetFamily::A) return in_A(d, w, tol);
    return f_verdict(lhs(d, w.k), w, defects, tol);
  };

  // Box implied by the first set: A fixes a_1 = 0 and lifts a_{s+1} to [1/2, 1].
  std::vector<double> lower(static_cast<std::size_t>(n), 0.0);
  std::vector<double> upper(static_cast<std::size_t>(n), 1.0);
  if (family == SetFamily::A) {
    upper[0] = 0.0;
    for (int s = first.k; s <= first.l && s + 1 <= n; ++s) lower[static_cast<std::size_t>(s)] = 0.5;
  }

  InclusionReport report;
  report.second_verdict.margin = std::numeric_limits<double>::infinity();
  const auto test = [&](const DiagonalElement& d) {
    ++report.members_tested;
    MembershipVerdict v = member_of(d, second);
    if (!v.member) {
      report.status = InclusionReport::Status::counterexample;
      report.counterexample = d;
      report.second_verdict = std::move(v);
      return false;
    }
    if (v.margin < report.second_verdict.margin) report.second_verdict = std::move(v);
    return true;
  };

  const DiagonalElement wit = witness(first, n);
  if (member_of(wit, first).member && !test(wit)) return report;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long max_draws = 100L * std::max(samples, 1);
  int accepted = 0;
  // The F inequalities of `first` only involve a_1 .. a_k, so those entries are
  // drawn and tested before the rest of the vector is filled in.
  const std::size_t prefix = family == SetFamily::F ? static_cast<std::size_t>(first.k) : 0;
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  const auto fill = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) a[i] = lower[i] + (upper[i] - lower[i]) * unit(rng);
  };
  for (long draw = 0; draw < max_draws && accepted < samples; ++draw) {
    fill(0, prefix);
    if (family == SetFamily::F) {
      std::fill(a.begin() + static_cast<std::ptrdiff_t>(prefix), a.end(), 0.0);
      if (!member_of(DiagonalElement(a), first).member) continue;
    }
    fill(prefix, a.size());
    const DiagonalElement d(a);
    ++accepted;
    if (!test(d)) return report;
  }

  report.status = report.members_tested == 0 ? InclusionReport::Status::vacuous
                                             : InclusionReport::Status::holds_on_samples;
  return report;
}

}  // namespace krylab
