#pragma once

// k-separability criteria from density-matrix elements of n-qubit states: a
// GHZ-type test (2^k - 2)A <= B and a W-type test C <= D + (n-k)E, and the
// separability degrees obtained by solving each for k.

#include "parallel.hpp"
#include "qstate.hpp"
#include "states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace entanglemeter {

/// Inequality tests count as violated only beyond this margin.
inline constexpr double kViolationTol = 1e-12;

struct CriterionTerms {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;
};

namespace detail {

inline void check_qubits(const DensityMatrix& rho, const char* what) {
  if (!rho.dims().all_qubits()) throw std::invalid_argument(std::string(what) + ": every site must be a qubit");
}

inline void check_k(int k, int n, const char* what) {
  if (k < 2 || k > n) {
    throw std::invalid_argument(std::string(what) + ": k must satisfy 2 <= k <= n (got k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace detail

/// Element read-off. With 0-based indices and N = 2^n:
///   A = |ρ(0, N-1)|,  B = Σ_{i=1}^{N-2} √(ρ(i,i) ρ(N-1-i, N-1-i)),
///   C = Σ_{i≠j} |ρ(2^i, 2^j)|,  D = Σ_{i≠j} √(ρ(0,0) ρ(2^i+2^j, 2^i+2^j)),
///   E = Σ_i |ρ(2^i, 2^i)|.
inline CriterionTerms criterion_terms(const DensityMatrix& rho) {
  detail::check_qubits(rho, "criterion_terms");
  const Matrix& m = rho.matrix();
  const int n = rho.sites();
  const Index last = m.rows() - 1;
  auto diag = [&](Index i) { return std::max(0.0, m(i, i).real()); };

  CriterionTerms t;
  t.A = std::abs(m(0, last));
  for (Index i = 1; i < last; ++i) t.B += std::sqrt(diag(i) * diag(last - i));
  for (int i = 0; i < n; ++i) {
    const Index bi = Index{1} << i;
    t.E += std::abs(m(bi, bi));
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Index bj = Index{1} << j;
      t.C += std::abs(m(bi, bj));
      t.D += std::sqrt(diag(0) * diag(bi + bj));
    }
  }
  return t;
}

inline bool ghz_test_violated(const CriterionTerms& t, int k) {
  return (std::pow(2.0, k) - 2.0) * t.A > t.B + kViolationTol;
}

inline bool w_test_violated(const CriterionTerms& t, int n, int k) {
  return t.C > t.D + (n - k) * t.E + kViolationTol;
}

/// True when the GHZ-type inequality is violated, certifying k-nonseparability.
inline bool ghz_criterion(const DensityMatrix& rho, int k) {
  detail::check_k(k, rho.sites(), "ghz_criterion");
  return ghz_test_violated(criterion_terms(rho), k);
}

/// True when the W-type inequality is violated, certifying k-nonseparability.
inline bool w_criterion(const DensityMatrix& rho, int k) {
  detail::check_k(k, rho.sites(), "w_criterion");
  return w_test_violated(criterion_terms(rho), rho.sites(), k);
}

struct SeparabilityDegrees {
  /// log2(2 + B/A); +inf when A = 0.
  double k_eff1 = std::numeric_limits<double>::infinity();
  /// n - (C - D)/E; +inf when E = 0.
  double k_eff2 = std::numeric_limits<double>::infinity();
};

inline SeparabilityDegrees k_eff(const CriterionTerms& t, int n) {
  SeparabilityDegrees out;
  if (t.A > 0.0) out.k_eff1 = std::log2(2.0 + t.B / t.A);
  if (t.E > 0.0) out.k_eff2 = n - (t.C - t.D) / t.E;
  return out;
}

inline SeparabilityDegrees k_eff(const DensityMatrix& rho) {
  return k_eff(criterion_terms(rho), rho.sites());
}

struct SeparabilityVerdict {
  int k = 2;
  bool ghz_test_violated = false;
  bool w_test_violated = false;
  double k_eff1 = std::numeric_limits<double>::infinity();
  double k_eff2 = std::numeric_limits<double>::infinity();
  /// k_eff above n carries no information about separability.
  bool k_eff1_uninformative = true;
  bool k_eff2_uninformative = true;

  bool k_nonseparable() const { return ghz_test_violated || w_test_violated; }
};

inline SeparabilityVerdict separability_verdict(const CriterionTerms& t, int n, int k) {
  detail::check_k(k, n, "separability_verdict");
  const auto deg = k_eff(t, n);
  SeparabilityVerdict v;
  v.k = k;
  v.ghz_test_violated = ghz_test_violated(t, k);
  v.w_test_violated = w_test_violated(t, n, k);
  v.k_eff1 = deg.k_eff1;
  v.k_eff2 = deg.k_eff2;
  v.k_eff1_uninformative = !(deg.k_eff1 <= n);
  v.k_eff2_uninformative = !(deg.k_eff2 <= n);
  return v;
}

inline SeparabilityVerdict separability_verdict(const DensityMatrix& rho, int k) {
  detail::check_qubits(rho, "separability_verdict");
  return separability_verdict(criterion_terms(rho), rho.sites(), k);
}

/// Inclusive arithmetic grid lo, lo + step, ..., up to hi.
struct GridAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::size_t count() const {
    if (!(step > 0.0) || hi < lo) return lo == hi ? 1 : 0;
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  }
  double value(std::size_t i) const { return std::min(hi, lo + static_cast<double>(i) * step); }

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
      throw std::invalid_argument("grid '" + name + "': bounds and step must be finite");
    }
    if (hi < lo) throw std::invalid_argument("grid '" + name + "': upper bound below lower bound");
    if (!(step > 0.0) && hi != lo) throw std::invalid_argument("grid '" + name + "': step must be positive");
  }
};

struct ScanRow {
  StateFamily family;
  int n = 0;
  int k = 2;
  /// Family parameters in family_parameters() order.
  std::vector<double> params;
  CriterionTerms terms;
  SeparabilityVerdict verdict;
};

/// Evaluates both criteria over the Cartesian product of `axes` (first axis
/// slowest) for every k. Parameters not on an axis come from `fixed`. Grid points
/// outside the family's domain (e.g. a + b > 1) are skipped.
inline std::vector<ScanRow> detection_scan(StateFamily family, int n, const std::vector<int>& ks,
                                           const std::vector<GridAxis>& axes,
                                           const std::vector<std::pair<std::string, double>>& fixed = {}) {
  const auto names = family_parameters(family);
  for (const auto& ax : axes) {
    ax.validate();
    if (std::find(names.begin(), names.end(), ax.name) == names.end()) {
      throw std::invalid_argument("grid parameter '" + ax.name + "' is not a parameter of " + to_string(family));
    }
  }
  for (int k : ks) detail::check_k(k, n, "detection_scan");

  std::size_t points = 1;
  for (const auto& ax : axes) points *= ax.count();
  std::vector<std::optional<std::vector<double>>> param_sets(points);
  std::vector<std::optional<CriterionTerms>> terms(points);
  parallel_for(points, [&](std::size_t p) {
    std::vector<double> params(names.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [key, v] : fixed)
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == key) params[i] = v;
    std::size_t rest = p;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const std::size_t c = axes[a].count();
      const double v = axes[a].value(rest % c);
      rest /= c;
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == axes[a].name) params[i] = v;
    }
    for (std::size_t i = 0; i < names.size(); ++i)
      if (std::isnan(params[i])) throw std::invalid_argument("parameter '" + names[i] + "' has no value");
    try {
      terms[p] = criterion_terms(state_factory(family, n, params));
      param_sets[p] = std::move(params);
    } catch (const std::invalid_argument&) {
      // outside the family's parameter domain
    }
  });

  std::vector<ScanRow> rows;
  for (std::size_t p = 0; p < points; ++p) {
    if (!terms[p]) continue;
    for (int k : ks) rows.push_back({family, n, k, *param_sets[p], *terms[p], separability_verdict(*terms[p], n, k)});
  }
  return rows;
}

/// Bisection for the switch point of a flag that is false at `lo` and true at
/// `hi`; returns the midpoint of the final bracket of width <= tol.
template <class Pred>
double bisect_switch(Pred&& flag, double lo, double hi, double tol) {
  if (flag(lo) || !flag(hi)) throw std::invalid_argument("bisect_switch: flag must be false at lo and true at hi");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (flag(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace entanglemeter
