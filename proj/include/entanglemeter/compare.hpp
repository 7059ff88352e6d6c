#pragma once

// Three-qubit comparison measures: concurrence fill, the geometric mean of
// q-concurrences (GqC), and ordering experiments on the |φ_θ⟩ family.

#include "measures.hpp"
#include "parallel.hpp"
#include "partitions.hpp"
#include "states.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace entanglemeter {

/// Tolerance used when clamping the fill's quartic-root argument.
inline constexpr double kFillClampTol = 1e-10;

/// Cut values at or below this are rounding residue of a product cut and count as 0;
/// the fractional roots below would otherwise amplify them.
inline constexpr double kZeroCutTol = 1e-14;

/// Squared one-vs-rest concurrences 2(1 - Tr ρ_i²) of a 3-qubit pure state.
inline std::array<double, 3> one_to_other_concurrences_sq(const PureState& psi) {
  if (psi.sites() != 3 || !psi.dims().all_qubits()) {
    throw std::invalid_argument("concurrence fill is defined for 3 qubits only");
  }
  std::array<double, 3> c2{};
  for (int i = 0; i < 3; ++i) {
    const RealVector spec = detail::reduced_spectrum(psi, std::uint32_t{1} << i);
    const double c = 2.0 * (1.0 - trace_power_of_spectrum(spec, 2.0));
    c2[static_cast<std::size_t>(i)] = c <= kZeroCutTol ? 0.0 : c;
  }
  return c2;
}

/// Heron area of the triangle with sides C²_1, C²_2, C²_3, normalized so GHZ₃ gives 1.
inline double concurrence_fill(const PureState& psi) {
  const auto c2 = one_to_other_concurrences_sq(psi);
  const double p = 0.5 * (c2[0] + c2[1] + c2[2]);
  double arg = 16.0 / 3.0 * p * (p - c2[0]) * (p - c2[1]) * (p - c2[2]);
  if (arg < 0.0) {
    if (arg < -kFillClampTol) throw std::logic_error("concurrence_fill: triangle inequality violated");
    arg = 0.0;
  }
  return std::pow(arg, 0.25);
}

/// [Π over all 2^{n-1} - 1 bipartitions of C_q]^{1/(2^{n-1} - 1)}; 0 if any cut vanishes.
inline double gqc(const PureState& psi, double q) {
  if (psi.sites() < 2) throw std::invalid_argument("gqc: needs n >= 2");
  if (!(q >= 2.0)) throw std::invalid_argument("gqc: q must be >= 2");
  double log_sum = 0.0;
  int cuts = 0;
  for (const Partition& p : bipartitions(psi.sites())) {
    const double c = family_term(detail::reduced_spectrum(psi, p.mask(0)), MeasureFamily::q, q);
    if (c <= kZeroCutTol) return 0.0;
    log_sum += std::log(c);
    ++cuts;
  }
  return std::exp(log_sum / cuts);
}

struct ComparisonRow {
  double theta = 0.0;
  double q = 3.0;
  double c_q_gme = 0.0;
  double gqc = 0.0;
  double fill = 0.0;
};

inline ComparisonRow compare_state(const PureState& psi, double theta, double q) {
  return {theta, q, q_gme_pure(psi, q).value, gqc(psi, q), concurrence_fill(psi)};
}

/// C_{q-GME}, GqC and the fill on |φ_θ⟩ for each θ, in grid order.
inline std::vector<ComparisonRow> phi_theta_table(const std::vector<double>& thetas, double q) {
  std::vector<ComparisonRow> rows(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t i) { rows[i] = compare_state(phi_theta_pure(thetas[i]), thetas[i], q); });
  return rows;
}

/// Differences at or below this are not counted as an ordering.
inline constexpr double kOrderingTol = 1e-9;

/// Indices (i, j) with C_{q-GME}(i) < C_{q-GME}(j) while both GqC(i) > GqC(j) and
/// fill(i) > fill(j). Returns the pair with the largest minimum margin.
inline std::optional<std::pair<std::size_t, std::size_t>> find_ordering_flip(const std::vector<ComparisonRow>& rows) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_margin = kOrderingTol;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const double margin = std::min({rows[j].c_q_gme - rows[i].c_q_gme, rows[i].gqc - rows[j].gqc,
                                      rows[i].fill - rows[j].fill});
      if (margin > best_margin) {
        best_margin = margin;
        best = std::pair{i, j};
      }
    }
  }
  return best;
}

}  // namespace entanglemeter
