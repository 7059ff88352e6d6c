#pragma once

// Convex-roof upper-bound estimation for mixed states, and the permutationally
// invariant (PI) part lower-bound indicator built on top of it.
//
// Every size-L pure-state ensemble of ρ = W W† (W = [√λ_j e_j], D×r) has the form
// |ψ̃_i⟩ = Σ_j U_ij √λ_j |e_j⟩ for an L×r isometry U. The search runs Nelder–Mead
// over an unconstrained complex L×r matrix X and maps it to U by QR
// orthonormalization at every evaluation, so every trial point is a valid ensemble
// and every returned value is attained by an explicit decomposition.

#include "measures.hpp"
#include "parallel.hpp"
#include "qstate.hpp"
#include "report.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace entanglemeter {

struct RoofOptions {
  /// Ensemble size L; 0 selects rank(ρ) + 2.
  int ensemble_size = 0;
  int restarts = 16;
  std::uint64_t seed = 42;
  int max_iters = 2000;
  /// Simplex-size convergence threshold.
  double tol = 1e-8;
};

struct WeightedState {
  double probability;
  PureState state;
};

/// Upper-bound estimate of the convex roof, with the decomposition attaining it.
struct RoofEstimate {
  double value = 0.0;
  int ensemble_size = 0;
  int restarts = 0;
  bool converged = false;
  std::vector<WeightedState> best_decomposition;
};

namespace detail {

/// Columns √λ_j e_j for the eigenvalues above kRankTol.
inline Matrix spectral_factor(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  std::vector<Index> keep;
  for (Index j = es.eigenvalues().size() - 1; j >= 0; --j)
    if (es.eigenvalues()(j) > kRankTol) keep.push_back(j);
  Matrix w(rho.dims().total(), static_cast<Index>(keep.size()));
  for (Index c = 0; c < w.cols(); ++c) {
    const Index j = keep[static_cast<std::size_t>(c)];
    w.col(c) = std::sqrt(es.eigenvalues()(j)) * es.eigenvectors().col(j);
  }
  return w;
}

inline constexpr double kNegligibleWeight = 1e-14;

class EnsembleObjective {
 public:
  EnsembleObjective(const SiteDims& dims, Matrix factor, int ensemble_size, const PureMeasureKernel& kernel)
      : dims_(dims), factor_(std::move(factor)), ensemble_(ensemble_size), kernel_(kernel) {}

  std::size_t parameter_count() const { return 2 * static_cast<std::size_t>(ensemble_) * factor_.cols(); }

  Matrix unpack(const double* x) const {
    const Index r = factor_.cols();
    Matrix m(ensemble_, r);
    for (Index i = 0; i < ensemble_; ++i)
      for (Index j = 0; j < r; ++j) {
        const std::size_t at = 2 * static_cast<std::size_t>(i * r + j);
        m(i, j) = cplx(x[at], x[at + 1]);
      }
    return m;
  }

  /// Unnormalized ensemble members ψ̃_i as columns (D×L).
  Matrix members(const double* x) const {
    const Matrix u = orthonormal_columns(unpack(x));
    return factor_ * u.transpose();
  }

  double operator()(const double* x) const {
    const Matrix psi = members(x);
    double total = 0.0;
    for (Index i = 0; i < psi.cols(); ++i) {
      const double p = psi.col(i).squaredNorm();
      if (p < kNegligibleWeight) continue;
      total += p * kernel_(PureState::normalized(dims_, psi.col(i)));
    }
    return total;
  }

  std::vector<WeightedState> decomposition(const double* x) const {
    const Matrix psi = members(x);
    std::vector<WeightedState> out;
    for (Index i = 0; i < psi.cols(); ++i) {
      const double p = psi.col(i).squaredNorm();
      if (p < kNegligibleWeight) continue;
      out.push_back({p, PureState::normalized(dims_, psi.col(i))});
    }
    return out;
  }

 private:
  SiteDims dims_;
  Matrix factor_;
  int ensemble_;
  const PureMeasureKernel& kernel_;
};

inline void disable_gsl_abort() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> x;
  bool converged = false;
};

/// Rebuilding the simplex around the best point after a run lets Nelder-Mead escape
/// the collapsed simplices it stalls on near kinks of the objective.
inline constexpr int kPolishRounds = 3;

inline RestartOutcome nelder_mead_run(const EnsembleObjective& objective, const std::vector<double>& start,
                                      double step_size, int max_iters, double tol) {
  disable_gsl_abort();
  const std::size_t dim = start.size();
  gsl_multimin_function fn;
  fn.n = dim;
  fn.params = const_cast<EnsembleObjective*>(&objective);
  fn.f = [](const gsl_vector* v, void* params) {
    return (*static_cast<const EnsembleObjective*>(params))(v->data);
  };

  using VecPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
  using MinPtr = std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;
  VecPtr x(gsl_vector_alloc(dim), &gsl_vector_free);
  VecPtr step(gsl_vector_alloc(dim), &gsl_vector_free);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set(step.get(), i, step_size);
  }
  MinPtr s(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());

  RestartOutcome out;
  for (int iter = 0; iter < max_iters; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(s.get());
  out.x.assign(best->data, best->data + dim);
  out.value = gsl_multimin_fminimizer_minimum(s.get());
  return out;
}

inline RestartOutcome nelder_mead(const EnsembleObjective& objective, std::vector<double> start, int max_iters,
                                  double tol) {
  RestartOutcome out = nelder_mead_run(objective, start, 0.25, max_iters, tol);
  for (int round = 0; round < kPolishRounds && out.value > 0.0; ++round) {
    RestartOutcome next = nelder_mead_run(objective, out.x, 0.05, max_iters, tol);
    const bool improved = next.value < out.value - 1e-15;
    if (next.value <= out.value) out = std::move(next);
    if (!improved) break;
  }
  // the identity start may already be optimal and never improve
  const double start_value = objective(start.data());
  if (start_value < out.value) {
    out.value = start_value;
    out.x = std::move(start);
  }
  return out;
}

}  // namespace detail

/// Upper-bound estimate of the convex roof of `spec` at ρ.
inline RoofEstimate roof_estimate(const DensityMatrix& rho, const MeasureSpec& spec, const RoofOptions& opts = {}) {
  spec.validate(rho.sites());
  const PureMeasureKernel kernel(rho.sites(), spec);
  const Matrix factor = detail::spectral_factor(rho);
  const int r = static_cast<int>(factor.cols());
  const int ensemble = opts.ensemble_size > 0 ? opts.ensemble_size : r + 2;
  if (ensemble < r) {
    throw std::invalid_argument("roof_estimate: ensemble_size " + std::to_string(ensemble) + " is below rank(rho) = " +
                                std::to_string(r));
  }
  if (opts.restarts < 1) throw std::invalid_argument("roof_estimate: restarts must be >= 1");

  RoofEstimate est;
  est.ensemble_size = ensemble;
  est.restarts = opts.restarts;
  if (r == 1) {
    // every decomposition of a pure state repeats the same vector
    const PureState psi = PureState::normalized(rho.dims(), factor.col(0));
    est.value = kernel(psi);
    est.converged = true;
    est.best_decomposition.push_back({1.0, psi});
    return est;
  }

  const detail::EnsembleObjective objective(rho.dims(), factor, ensemble, kernel);
  const std::size_t dim = objective.parameter_count();
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  parallel_for(outcomes.size(), [&](std::size_t restart) {
    std::vector<double> start(dim, 0.0);
    if (restart == 0) {
      // spectral decomposition: X = [I_r; 0]
      for (int j = 0; j < r; ++j) start[2 * static_cast<std::size_t>(j * r + j)] = 1.0;
    } else {
      Rng rng(opts.seed + restart);
      std::normal_distribution<double> normal;
      for (double& v : start) v = normal(rng);
    }
    outcomes[restart] = detail::nelder_mead(objective, std::move(start), opts.max_iters, opts.tol);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i)
    if (outcomes[i].value < outcomes[best].value) best = i;
  est.value = std::max(0.0, outcomes[best].value);
  est.converged = outcomes[best].converged;
  est.best_decomposition = objective.decomposition(outcomes[best].x.data());
  return est;
}

struct UnitarySearch {
  /// Random local-unitary candidates tried in addition to the identity.
  int restarts = 8;
  std::uint64_t seed = 42;
  /// Iteration budget of each inner roof estimate.
  int max_iters = 2000;
};

/// max over sampled local unitaries U of the measure of (UρU†)^PI. The identity
/// is always a candidate. Certified only when the maximizing PI part is pure, in
/// which case the inner value is exact rather than a roof upper estimate.
inline BoundReport pi_lower_bound(const DensityMatrix& rho, const MeasureSpec& spec, const UnitarySearch& search = {},
                                  RoofOptions roof = {}) {
  if (!rho.dims().is_uniform()) throw std::invalid_argument("pi_lower_bound: all local dimensions must be equal");
  if (rho.sites() > kMaxPiSites) throw std::invalid_argument("pi_lower_bound: at most 8 sites");
  spec.validate(rho.sites());
  roof.max_iters = search.max_iters;

  BoundReport report;
  report.name = spec.family == MeasureFamily::q ? "q-pi-bound" : "alpha-pi-bound";
  double best = -1.0;
  int best_candidate = 0;
  bool best_exact = false;
  for (int c = 0; c <= search.restarts; ++c) {
    LocalUnitarySet u = LocalUnitarySet::identity(rho.dims());
    if (c > 0) {
      Rng rng(search.seed + static_cast<std::uint64_t>(c));
      u = LocalUnitarySet::haar(rho.dims(), rng);
    }
    const DensityMatrix sigma = pi_part(apply_local_unitaries(rho, u));
    double value = 0.0;
    bool exact = false;
    if (auto psi = as_pure(sigma)) {
      value = k_me_pure(*psi, spec).value;
      exact = true;
    } else {
      roof.seed = search.seed + static_cast<std::uint64_t>(c);
      value = roof_estimate(sigma, spec, roof).value;
    }
    if (value > best || (value == best && exact && !best_exact)) {
      best = value;
      best_candidate = c;
      best_exact = exact;
    }
  }
  report.value = std::max(0.0, best);
  report.certified = best_exact;
  report.vacuous = best <= 0.0;
  report.inputs = {{spec.param_name(), spec.param},
                   {"k", static_cast<double>(spec.k)},
                   {"n", static_cast<double>(rho.sites())},
                   {"unitary_restarts", static_cast<double>(search.restarts)},
                   {"best_candidate", static_cast<double>(best_candidate)}};
  return report;
}

}  // namespace entanglemeter
