#pragma once

// Optimization-free lower bounds built from partial-transpose and realignment
// trace norms, and the global negativity they are expressed in.

#include "measures.hpp"
#include "partitions.hpp"
#include "qstate.hpp"
#include "report.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace entanglemeter {

/// Lower edge of the qubit regime s <= q < 3 of the Wei-type q-concurrence bound.
/// Taken as the published constant, inclusive at q = s.
inline constexpr double kWeiRegimeEdge = 2.4721;

/// N^p = (‖ρ^{T_p}‖₁ - 1)/(d_p - 1); clamped at 0 against eigensolver noise.
inline double global_negativity(const DensityMatrix& rho, int site) {
  if (site < 0 || site >= rho.sites()) {
    throw std::out_of_range("global_negativity: site index " + std::to_string(site) + " out of range");
  }
  const double norm = trace_norm_hermitian(partial_transpose(rho, site));
  return std::max(0.0, (norm - 1.0) / (rho.dims().dim(site) - 1));
}

inline std::vector<double> global_negativities(const DensityMatrix& rho) {
  std::vector<double> out;
  for (int p = 0; p < rho.sites(); ++p) out.push_back(global_negativity(rho, p));
  return out;
}

namespace detail {

inline void finalize(BoundReport& r, double raw) {
  r.certified = true;
  r.vacuous = !(raw > 0.0);
  r.value = r.vacuous ? 0.0 : raw;
}

inline void add_negativities(BoundReport& r, const std::vector<double>& neg) {
  for (std::size_t p = 0; p < neg.size(); ++p) r.inputs.emplace_back("N" + std::to_string(p + 1), neg[p]);
}

struct CutNorms {
  double partial_transpose;
  double realignment;
  double m;
};

inline CutNorms cut_norms(const DensityMatrix& rho, const Partition& bipart, const char* what) {
  if (bipart.size() != 2) throw std::invalid_argument(std::string(what) + ": partition must have exactly 2 blocks");
  if (bipart.sites() != rho.sites()) throw std::invalid_argument(std::string(what) + ": partition does not match site count");
  const double da = static_cast<double>(rho.dims().subsystem_dim(bipart.block(0)));
  const double db = static_cast<double>(rho.dims().subsystem_dim(bipart.block(1)));
  return {trace_norm_hermitian(partial_transpose(rho, bipart.block(0))), trace_norm(realign(rho, bipart)),
          std::min(da, db)};
}

inline int uniform_local_dim(const DensityMatrix& rho, const char* what) {
  if (!rho.dims().is_uniform()) throw std::invalid_argument(std::string(what) + ": all local dimensions must be equal");
  return rho.dims().dim(0);
}

inline void check_q(double q, const char* what) {
  if (!(q >= 2.0)) throw std::invalid_argument(std::string(what) + ": q must be >= 2");
}

}  // namespace detail

/// C_q(ρ_AB) >= [max(‖ρ^{T_A}‖₁^{q-1}, ‖R(ρ)‖₁^{q-1}) - 1]² / (m^{2q-2} - m^{q-1}).
inline BoundReport q_bipartite_bound(const DensityMatrix& rho, const Partition& bipart, double q) {
  detail::check_q(q, "q_bipartite_bound");
  const auto c = detail::cut_norms(rho, bipart, "q_bipartite_bound");
  const double excess =
      std::max(std::pow(c.partial_transpose, q - 1.0), std::pow(c.realignment, q - 1.0)) - 1.0;
  BoundReport r;
  r.name = "q-bipartite";
  r.inputs = {{"q", q}, {"m", c.m}, {"pt_norm", c.partial_transpose}, {"realign_norm", c.realignment}};
  detail::finalize(r, excess > 0.0 ? excess * excess / (std::pow(c.m, 2 * q - 2) - std::pow(c.m, q - 1)) : 0.0);
  return r;
}

/// Wei-type bipartite bound, in the regimes q >= 2 with m >= 3, q >= 3 with
/// m = 2, and s <= q < 3 with m = 2.
inline BoundReport wei_bipartite_bound(const DensityMatrix& rho, const Partition& bipart, double q) {
  detail::check_q(q, "wei_bipartite_bound");
  const auto c = detail::cut_norms(rho, bipart, "wei_bipartite_bound");
  const double excess = std::max(c.partial_transpose, c.realignment) - 1.0;
  const double t2 = excess > 0.0 ? excess * excess : 0.0;
  BoundReport r;
  r.name = "wei-bipartite";
  r.inputs = {{"q", q}, {"m", c.m}, {"pt_norm", c.partial_transpose}, {"realign_norm", c.realignment}};
  double coefficient = 0.0;
  if (c.m >= 3 || q >= 3.0) {
    coefficient = (1.0 - std::pow(c.m, 1.0 - q)) / ((c.m - 1.0) * (c.m - 1.0));
  } else if (q >= kWeiRegimeEdge) {
    coefficient = (1.0 - std::pow(2.0, 1.0 - q)) / (2.0 - std::pow(2.0, 2.0 - kWeiRegimeEdge));
    r.inputs.emplace_back("s", kWeiRegimeEdge);
  } else {
    throw std::domain_error("wei_bipartite_bound: regime not covered (m = 2 requires q >= " +
                            std::to_string(kWeiRegimeEdge) + ")");
  }
  detail::finalize(r, coefficient * t2);
  return r;
}

/// n-qubit q-n-ME bound: Σ_k [(N^k + 1)^{q-1} - 1]² / (n (2^{2q-2} - 2^{q-1})).
/// Tight for pure states at q = 2.
inline BoundReport qn_bound_qubit(const DensityMatrix& rho, double q) {
  detail::check_q(q, "qn_bound_qubit");
  if (!rho.dims().all_qubits()) throw std::invalid_argument("qn_bound_qubit: every site must be a qubit");
  const auto neg = global_negativities(rho);
  const double n = static_cast<double>(rho.sites());
  double sum = 0.0;
  for (double nk : neg) {
    const double t = std::pow(nk + 1.0, q - 1.0) - 1.0;
    sum += t * t;
  }
  BoundReport r;
  r.name = "qn-qubit";
  r.inputs = {{"q", q}, {"n", n}, {"m", 2.0}};
  detail::add_negativities(r, neg);
  detail::finalize(r, sum / (n * (std::pow(2.0, 2 * q - 2) - std::pow(2.0, q - 1))));
  return r;
}

/// Equal-dimension version: Σ_k {[(m-1)N^k + 1]^{q-1} - 1}² / (n (m^{2q-2} - m^{q-1})).
inline BoundReport qn_bound_qudit(const DensityMatrix& rho, double q) {
  detail::check_q(q, "qn_bound_qudit");
  const double m = detail::uniform_local_dim(rho, "qn_bound_qudit");
  const auto neg = global_negativities(rho);
  const double n = static_cast<double>(rho.sites());
  double sum = 0.0;
  for (double nk : neg) {
    const double t = std::pow((m - 1.0) * nk + 1.0, q - 1.0) - 1.0;
    sum += t * t;
  }
  BoundReport r;
  r.name = "qn-qudit";
  r.inputs = {{"q", q}, {"n", n}, {"m", m}};
  detail::add_negativities(r, neg);
  detail::finalize(r, sum / (n * (std::pow(m, 2 * q - 2) - std::pow(m, q - 1))));
  return r;
}

/// Quadratic-in-negativity q-n-ME bound: coefficient · Σ_k (N^k)² with
///   qubits, q >= 3:      (2^{q-1} - 1)/(2^{q-1} n)
///   qubits, s <= q < 3:  (1 - 2^{1-q})/((2 - 2^{2-s}) n)
///   qudits (m >= 3):     (1 - m^{1-q})/(n (m-1)²)
inline BoundReport qn_bound_improved(const DensityMatrix& rho, double q) {
  detail::check_q(q, "qn_bound_improved");
  const double m = detail::uniform_local_dim(rho, "qn_bound_improved");
  const auto neg = global_negativities(rho);
  const double n = static_cast<double>(rho.sites());
  double sum_sq = 0.0;
  for (double nk : neg) sum_sq += nk * nk;
  BoundReport r;
  r.name = "qn-improved";
  r.inputs = {{"q", q}, {"n", n}, {"m", m}};
  double coefficient = 0.0;
  if (m >= 3) {
    coefficient = (1.0 - std::pow(m, 1.0 - q)) / (n * (m - 1.0) * (m - 1.0));
  } else if (q >= 3.0) {
    coefficient = (std::pow(2.0, q - 1.0) - 1.0) / (std::pow(2.0, q - 1.0) * n);
  } else if (q >= kWeiRegimeEdge) {
    coefficient = (1.0 - std::pow(2.0, 1.0 - q)) / ((2.0 - std::pow(2.0, 2.0 - kWeiRegimeEdge)) * n);
    r.inputs.emplace_back("s", kWeiRegimeEdge);
  } else {
    throw std::domain_error("qn_bound_improved: regime not covered (qubits require q >= " +
                            std::to_string(kWeiRegimeEdge) + ")");
  }
  detail::add_negativities(r, neg);
  detail::finalize(r, coefficient * sum_sq);
  return r;
}

/// α-n-ME bound: (m^{1-α} - 1)/(n (m-1)) · Σ_k N^k (m = 2 gives the qubit form).
inline BoundReport alphan_bound(const DensityMatrix& rho, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw std::invalid_argument("alphan_bound: alpha must lie in [0, 1/2]");
  const double m = detail::uniform_local_dim(rho, "alphan_bound");
  const auto neg = global_negativities(rho);
  const double n = static_cast<double>(rho.sites());
  double sum = 0.0;
  for (double nk : neg) sum += nk;
  BoundReport r;
  r.name = "alphan";
  r.inputs = {{"alpha", alpha}, {"n", n}, {"m", m}};
  detail::add_negativities(r, neg);
  detail::finalize(r, (std::pow(m, 1.0 - alpha) - 1.0) / (n * (m - 1.0)) * sum);
  return r;
}

/// One global negativity N^p as a report row (certified: N^p > 0 witnesses entanglement).
inline BoundReport negativity_report(const DensityMatrix& rho, int site) {
  BoundReport r;
  r.name = "global-negativity";
  r.inputs = {{"p", static_cast<double>(site + 1)}, {"d_p", static_cast<double>(rho.dims().dim(site))}};
  detail::finalize(r, global_negativity(rho, site));
  return r;
}

/// A bound to run: name plus its parameter (q or α) and, for bipartite bounds, the cut.
struct BoundRequest {
  std::string name;
  double param = 2.0;
  std::optional<Partition> cut;
};

inline std::vector<std::string> bound_names() {
  return {"global-negativity", "q-bipartite", "wei-bipartite", "qn-qubit", "qn-qudit", "qn-improved", "alphan"};
}

/// Runs one request. "global-negativity" yields one row per site.
inline std::vector<BoundReport> run_bound(const DensityMatrix& rho, const BoundRequest& req) {
  const Partition cut = req.cut ? *req.cut : Partition::parse("1|" + [&] {
    std::string rest;
    for (int s = 2; s <= rho.sites(); ++s) rest += (s > 2 ? "," : "") + std::to_string(s);
    return rest;
  }());
  if (req.name == "global-negativity") {
    std::vector<BoundReport> out;
    for (int p = 0; p < rho.sites(); ++p) out.push_back(negativity_report(rho, p));
    return out;
  }
  if (req.name == "q-bipartite") return {q_bipartite_bound(rho, cut, req.param)};
  if (req.name == "wei-bipartite") return {wei_bipartite_bound(rho, cut, req.param)};
  if (req.name == "qn-qubit") return {qn_bound_qubit(rho, req.param)};
  if (req.name == "qn-qudit") return {qn_bound_qudit(rho, req.param)};
  if (req.name == "qn-improved") return {qn_bound_improved(rho, req.param)};
  if (req.name == "alphan") return {alphan_bound(rho, req.param)};
  throw std::invalid_argument("unknown bound '" + req.name + "'");
}

inline constexpr double kVerdictThreshold = 1e-10;

struct EntanglementVerdict {
  /// True iff some certified bound exceeds kVerdictThreshold ("n-nonseparable").
  bool entangled = false;
  std::optional<BoundReport> witness;
  std::vector<BoundReport> reports;
};

inline EntanglementVerdict entanglement_verdict(const DensityMatrix& rho, const std::vector<BoundRequest>& requests) {
  EntanglementVerdict v;
  for (const auto& req : requests) {
    for (auto& r : run_bound(rho, req)) {
      if (!v.entangled && r.certified && r.value > kVerdictThreshold) {
        v.entangled = true;
        v.witness = r;
      }
      v.reports.push_back(std::move(r));
    }
  }
  return v;
}

}  // namespace entanglemeter
