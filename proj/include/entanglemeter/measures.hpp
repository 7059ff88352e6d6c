#pragma once

// Pure-state q-k-ME and α-k-ME concurrences and their bipartite building blocks.

#include "partitions.hpp"
#include "qstate.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace entanglemeter {

enum class MeasureFamily { q, alpha };

/// Which measure to evaluate: family, its parameter (q or α), and k.
struct MeasureSpec {
  MeasureFamily family = MeasureFamily::q;
  double param = 2.0;
  int k = 2;

  static MeasureSpec q_k(double q, int k) { return {MeasureFamily::q, q, k}; }
  static MeasureSpec alpha_k(double alpha, int k) { return {MeasureFamily::alpha, alpha, k}; }

  void validate_param() const {
    if (family == MeasureFamily::q && !(param >= 2.0)) {
      throw std::invalid_argument("q-k-ME concurrence requires q >= 2 (got " + std::to_string(param) + ")");
    }
    if (family == MeasureFamily::alpha && !(param >= 0.0 && param <= 0.5)) {
      throw std::invalid_argument("alpha-k-ME concurrence requires 0 <= alpha <= 1/2 (got " + std::to_string(param) +
                                  ")");
    }
  }

  void validate(int n) const {
    validate_param();
    if (k < 2 || k > n) {
      throw std::invalid_argument("k must satisfy 2 <= k <= n (got k=" + std::to_string(k) +
                                  ", n=" + std::to_string(n) + ")");
    }
  }

  std::string name() const { return family == MeasureFamily::q ? "q-k-ME" : "alpha-k-ME"; }
  std::string param_name() const { return family == MeasureFamily::q ? "q" : "alpha"; }
};

/// Value of a minimized measure together with the partition attaining it.
struct MeasureResult {
  double value = 0.0;
  Partition argmin;
};

/// Partitions whose value lies within this distance of the minimum count as ties;
/// the first in enumeration order wins.
inline constexpr double kTieTol = 1e-13;

/// Σ λ^p over a spectrum. Negative eigenvalues are clamped to 0; for p < 1 the
/// eigenvalues at or below kRankTol are treated as exact zeros, so p = 0 gives the rank.
inline double trace_power_of_spectrum(const RealVector& eigenvalues, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("trace_power: exponent must be >= 0");
  double sum = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double lam = std::max(0.0, eigenvalues(i));
    if (p < 1.0 && lam <= kRankTol) continue;
    sum += (p == 0.0) ? 1.0 : std::pow(lam, p);
  }
  return sum;
}

/// Tr ρ^p.
inline double trace_power(const DensityMatrix& rho, double p) {
  return trace_power_of_spectrum(hermitian_eigenvalues(rho.matrix()), p);
}

/// Bipartite term of one family evaluated on a reduced spectrum:
/// 1 - Tr ρ^q (q-family) or Tr ρ^α - 1 (α-family).
inline double family_term(const RealVector& spectrum, MeasureFamily family, double param) {
  const double tp = trace_power_of_spectrum(spectrum, param);
  // both forms are nonnegative; only rounding can push them below 0
  return std::max(0.0, family == MeasureFamily::q ? 1.0 - tp : tp - 1.0);
}

namespace detail {

inline std::vector<int> sites_of_mask(std::uint32_t mask, int n) {
  std::vector<int> out;
  for (int s = 0; s < n; ++s)
    if (mask & (std::uint32_t{1} << s)) out.push_back(s);
  return out;
}

/// Nonzero spectrum of the reduced state on `mask`, via the smaller Gram matrix.
inline RealVector reduced_spectrum(const PureState& psi, std::uint32_t mask) {
  const Matrix m = bipartite_reshape(psi, sites_of_mask(mask, psi.sites()));
  if (m.rows() <= m.cols()) return hermitian_eigenvalues(m * m.adjoint());
  return hermitian_eigenvalues(m.adjoint() * m);
}

/// Block masks of every k-partition of n sites, in enumeration order.
inline std::vector<std::vector<std::uint32_t>> partition_masks(int n, int k) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const Partition& p : k_partitions(n, k)) {
    std::vector<std::uint32_t> masks;
    for (int t = 0; t < p.size(); ++t) masks.push_back(p.mask(t));
    out.push_back(std::move(masks));
  }
  return out;
}

/// Memoizes the bipartite term of each block of one pure state.
class BlockTerms {
 public:
  BlockTerms(const PureState& psi, MeasureFamily family, double param)
      : psi_(psi), family_(family), param_(param),
        cache_(std::size_t{1} << psi.sites(), std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(std::uint32_t mask) {
    double& slot = cache_[mask];
    if (std::isnan(slot)) slot = family_term(reduced_spectrum(psi_, mask), family_, param_);
    return slot;
  }

 private:
  const PureState& psi_;
  MeasureFamily family_;
  double param_;
  std::vector<double> cache_;
};

/// Index of the first entry within kTieTol of the minimum.
inline std::size_t first_minimum(const std::vector<double>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) best = std::min(best, v);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= best + kTieTol) return i;
  return 0;
}

inline double minimum(const std::vector<double>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) best = std::min(best, v);
  return best;
}

inline void check_bipartition(const PureState& psi, const Partition& bipart, const char* what) {
  if (bipart.size() != 2) throw std::invalid_argument(std::string(what) + ": partition must have exactly 2 blocks");
  if (bipart.sites() != psi.sites()) throw std::invalid_argument(std::string(what) + ": partition does not match site count");
}

}  // namespace detail

/// C_q across a bipartition: 1 - Tr ρ_A^q, A = the block containing site 0.
inline double q_concurrence(const PureState& psi, const Partition& bipart, double q) {
  detail::check_bipartition(psi, bipart, "q_concurrence");
  if (!(q >= 2.0)) throw std::invalid_argument("q_concurrence: q must be >= 2");
  return family_term(detail::reduced_spectrum(psi, bipart.mask(0)), MeasureFamily::q, q);
}

/// C_α across a bipartition: Tr ρ_A^α - 1.
inline double alpha_concurrence(const PureState& psi, const Partition& bipart, double alpha) {
  detail::check_bipartition(psi, bipart, "alpha_concurrence");
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha_concurrence: alpha must lie in [0, 1/2]");
  return family_term(detail::reduced_spectrum(psi, bipart.mask(0)), MeasureFamily::alpha, alpha);
}

/// min over k-partitions of (1/k) Σ_t term(ρ_{A_t}); works for either family.
inline MeasureResult k_me_pure(const PureState& psi, const MeasureSpec& spec) {
  spec.validate(psi.sites());
  detail::BlockTerms terms(psi, spec.family, spec.param);
  std::vector<double> values;
  std::vector<Partition> parts;
  for (const Partition& p : k_partitions(psi.sites(), spec.k)) {
    double sum = 0.0;
    for (int t = 0; t < p.size(); ++t) sum += terms(p.mask(t));
    values.push_back(sum / spec.k);
    parts.push_back(p);
  }
  return {detail::minimum(values), parts[detail::first_minimum(values)]};
}

inline MeasureResult q_k_me_pure(const PureState& psi, const MeasureSpec& spec) {
  if (spec.family != MeasureFamily::q) throw std::invalid_argument("q_k_me_pure: spec must be of the q family");
  return k_me_pure(psi, spec);
}

inline MeasureResult alpha_k_me_pure(const PureState& psi, const MeasureSpec& spec) {
  if (spec.family != MeasureFamily::alpha) throw std::invalid_argument("alpha_k_me_pure: spec must be of the alpha family");
  return k_me_pure(psi, spec);
}

/// GME form: min over bipartitions of the single-cut term (not the two-block average).
inline MeasureResult gme_pure(const PureState& psi, MeasureFamily family, double param) {
  if (psi.sites() < 2) throw std::invalid_argument("GME concurrence needs n >= 2");
  MeasureSpec{family, param, 2}.validate_param();
  detail::BlockTerms terms(psi, family, param);
  std::vector<double> values;
  std::vector<Partition> parts;
  for (const Partition& p : bipartitions(psi.sites())) {
    values.push_back(terms(p.mask(0)));
    parts.push_back(p);
  }
  return {detail::minimum(values), parts[detail::first_minimum(values)]};
}

inline MeasureResult q_gme_pure(const PureState& psi, double q) { return gme_pure(psi, MeasureFamily::q, q); }

inline MeasureResult alpha_gme_pure(const PureState& psi, double alpha) {
  return gme_pure(psi, MeasureFamily::alpha, alpha);
}

/// Value-only evaluation for a fixed (n, k) partition list; used on the hot path
/// of the convex-roof search.
class PureMeasureKernel {
 public:
  PureMeasureKernel(int n, const MeasureSpec& spec) : spec_(spec), masks_(detail::partition_masks(n, spec.k)) {
    spec.validate(n);
  }

  double operator()(const PureState& psi) const {
    detail::BlockTerms terms(psi, spec_.family, spec_.param);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& blocks : masks_) {
      double sum = 0.0;
      for (std::uint32_t m : blocks) sum += terms(m);
      best = std::min(best, sum / spec_.k);
    }
    return best;
  }

  const MeasureSpec& spec() const { return spec_; }

 private:
  MeasureSpec spec_;
  std::vector<std::vector<std::uint32_t>> masks_;
};

}  // namespace entanglemeter
