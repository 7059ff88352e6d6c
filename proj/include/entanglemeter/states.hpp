#pragma once

// Named state families used throughout the worked examples.

#include "qstate.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace entanglemeter {

enum class StateFamily { ghz, w, ghz_noise, w_noise, ghz_w_noise, phi_theta };

inline std::string to_string(StateFamily f) {
  switch (f) {
    case StateFamily::ghz: return "ghz";
    case StateFamily::w: return "w";
    case StateFamily::ghz_noise: return "ghz_noise";
    case StateFamily::w_noise: return "w_noise";
    case StateFamily::ghz_w_noise: return "ghz_w_noise";
    case StateFamily::phi_theta: return "phi_theta";
  }
  return "?";
}

/// Accepts both "ghz_w_noise" and "ghz-w-noise".
inline StateFamily parse_family(std::string_view name) {
  std::string s(name);
  for (char& c : s)
    if (c == '-') c = '_';
  for (auto f : {StateFamily::ghz, StateFamily::w, StateFamily::ghz_noise, StateFamily::w_noise,
                 StateFamily::ghz_w_noise, StateFamily::phi_theta}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown state family '" + std::string(name) + "'");
}

/// Names of the real parameters each family takes, in positional order.
inline std::vector<std::string> family_parameters(StateFamily f) {
  switch (f) {
    case StateFamily::ghz_noise: return {"t"};
    case StateFamily::w_noise: return {"a"};
    case StateFamily::ghz_w_noise: return {"a", "b"};
    case StateFamily::phi_theta: return {"theta"};
    default: return {};
  }
}

namespace detail {

inline void check_family_sites(int n, const char* what) {
  if (n < 2 || n > 12) throw std::invalid_argument(std::string(what) + ": need 2 <= n <= 12 qubits");
}

inline void check_weight(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string("parameter ") + name + " = " + std::to_string(x) + " outside [0, 1]");
  }
}

inline DensityMatrix mix_with_noise(const std::vector<std::pair<double, const PureState*>>& parts, double noise,
                                    const SiteDims& dims) {
  Matrix m = Matrix::Identity(dims.total(), dims.total()) * (noise / static_cast<double>(dims.total()));
  for (const auto& [w, psi] : parts) m += w * (psi->amplitudes() * psi->amplitudes().adjoint());
  return DensityMatrix(dims, hermitian_part(m), unchecked);
}

}  // namespace detail

/// (|0…0⟩ + |1…1⟩)/√2.
inline PureState ghz_pure(int n) {
  detail::check_family_sites(n, "ghz");
  SiteDims dims = SiteDims::qubits(n);
  Vector v = Vector::Zero(dims.total());
  v(0) = v(dims.total() - 1) = 1.0 / std::sqrt(2.0);
  return PureState::normalized(std::move(dims), std::move(v));
}

/// Uniform superposition of the n single-excitation basis states.
inline PureState w_pure(int n) {
  detail::check_family_sites(n, "w");
  SiteDims dims = SiteDims::qubits(n);
  Vector v = Vector::Zero(dims.total());
  for (int s = 0; s < n; ++s) v(dims.stride(s)) = 1.0 / std::sqrt(static_cast<double>(n));
  return PureState::normalized(std::move(dims), std::move(v));
}

/// -½cosθ|010⟩ + (√3/2)cosθ|100⟩ + sinθ|011⟩.
inline PureState phi_theta_pure(double theta) {
  SiteDims dims = SiteDims::qubits(3);
  Vector v = Vector::Zero(8);
  v(0b010) = -0.5 * std::cos(theta);
  v(0b100) = 0.5 * std::sqrt(3.0) * std::cos(theta);
  v(0b011) = std::sin(theta);
  return PureState::normalized(std::move(dims), std::move(v));
}

/// t|GHZ⟩⟨GHZ| + (1-t) I/2ⁿ.
inline DensityMatrix ghz_noise(int n, double t) {
  detail::check_weight(t, "t");
  const PureState ghz = ghz_pure(n);
  return detail::mix_with_noise({{t, &ghz}}, 1.0 - t, ghz.dims());
}

/// a|W⟩⟨W| + (1-a) I/2ⁿ.
inline DensityMatrix w_noise(int n, double a) {
  detail::check_weight(a, "a");
  const PureState w = w_pure(n);
  return detail::mix_with_noise({{a, &w}}, 1.0 - a, w.dims());
}

/// a|GHZ⟩⟨GHZ| + b|W⟩⟨W| + (1-a-b) I/2ⁿ.
inline DensityMatrix ghz_w_noise(int n, double a, double b) {
  detail::check_weight(a, "a");
  detail::check_weight(b, "b");
  if (a + b > 1.0 + 1e-12) throw std::invalid_argument("ghz_w_noise: a + b must not exceed 1");
  const PureState ghz = ghz_pure(n);
  const PureState w = w_pure(n);
  return detail::mix_with_noise({{a, &ghz}, {b, &w}}, std::max(0.0, 1.0 - a - b), ghz.dims());
}

/// Builds a member of `family` on n qubits; `params` follow family_parameters().
inline DensityMatrix state_factory(StateFamily family, int n, const std::vector<double>& params) {
  const auto expected = family_parameters(family);
  if (params.size() != expected.size()) {
    throw std::invalid_argument(to_string(family) + ": expected " + std::to_string(expected.size()) +
                                " parameter(s), got " + std::to_string(params.size()));
  }
  switch (family) {
    case StateFamily::ghz: return to_density(ghz_pure(n));
    case StateFamily::w: return to_density(w_pure(n));
    case StateFamily::ghz_noise: return ghz_noise(n, params[0]);
    case StateFamily::w_noise: return w_noise(n, params[0]);
    case StateFamily::ghz_w_noise: return ghz_w_noise(n, params[0], params[1]);
    case StateFamily::phi_theta:
      if (n != 3) throw std::invalid_argument("phi_theta: defined for n = 3 only");
      return to_density(phi_theta_pure(params[0]));
  }
  throw std::invalid_argument("state_factory: unknown family");
}

inline DensityMatrix state_factory(std::string_view family, int n, const std::vector<double>& params) {
  return state_factory(parse_family(family), n, params);
}

}  // namespace entanglemeter
