#pragma once

// Dense pure and mixed n-qudit states and the subsystem operations on them.
//
// Basis convention: computational basis, row-major. Site 0 is the most
// significant digit, so basis index i has digits (x_0, ..., x_{n-1}) with
// i = sum_s x_s * stride_s and stride_{n-1} = 1.

#include "linalg.hpp"
#include "partitions.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entanglemeter {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kRankTol = 1e-10;

/// Largest supported total dimension (12 qubits).
inline constexpr Index kMaxTotalDim = 4096;

class SiteDims {
 public:
  explicit SiteDims(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("SiteDims: at least one site is required");
    total_ = 1;
    for (int d : dims_) {
      if (d < 2) throw std::invalid_argument("SiteDims: every local dimension must be >= 2");
      total_ *= d;
      if (total_ > kMaxTotalDim) {
        throw std::invalid_argument("SiteDims: total dimension exceeds " + std::to_string(kMaxTotalDim));
      }
    }
    strides_.assign(dims_.size(), 1);
    for (int s = static_cast<int>(dims_.size()) - 2; s >= 0; --s) strides_[s] = strides_[s + 1] * dims_[s + 1];
  }

  static SiteDims qubits(int n) { return SiteDims(std::vector<int>(n, 2)); }
  static SiteDims uniform(int n, int d) { return SiteDims(std::vector<int>(n, d)); }

  int sites() const { return static_cast<int>(dims_.size()); }
  int dim(int site) const { return dims_.at(site); }
  Index stride(int site) const { return strides_.at(site); }
  Index total() const { return total_; }
  const std::vector<int>& values() const { return dims_; }

  bool is_uniform() const {
    return std::all_of(dims_.begin(), dims_.end(), [&](int d) { return d == dims_.front(); });
  }
  bool all_qubits() const {
    return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 2; });
  }

  int digit(Index basis, int site) const { return static_cast<int>((basis / strides_[site]) % dims_[site]); }

  /// Product of local dimensions over `sites`.
  Index subsystem_dim(const std::vector<int>& sites) const {
    Index d = 1;
    for (int s : sites) d *= dims_.at(s);
    return d;
  }

  SiteDims select(const std::vector<int>& sites) const {
    std::vector<int> out;
    out.reserve(sites.size());
    for (int s : sites) out.push_back(dims_.at(s));
    return SiteDims(std::move(out));
  }

  bool operator==(const SiteDims&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<Index> strides_;
  Index total_ = 1;
};

namespace detail {

/// Sorted, deduplicated-checked copy of a site set; throws on out-of-range,
/// duplicate, or (unless allowed) empty input.
inline std::vector<int> checked_sites(const SiteDims& dims, std::vector<int> sites, const char* what,
                                      bool allow_empty = false) {
  if (sites.empty() && !allow_empty) throw std::invalid_argument(std::string(what) + ": empty subsystem");
  std::sort(sites.begin(), sites.end());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 0 || sites[i] >= dims.sites()) {
      throw std::out_of_range(std::string(what) + ": site index " + std::to_string(sites[i]) + " out of range");
    }
    if (i && sites[i] == sites[i - 1]) {
      throw std::invalid_argument(std::string(what) + ": duplicate site index " + std::to_string(sites[i]));
    }
  }
  return sites;
}

inline std::vector<int> complement_sites(const SiteDims& dims, const std::vector<int>& sorted_sites) {
  std::vector<int> out;
  for (int s = 0; s < dims.sites(); ++s) {
    if (!std::binary_search(sorted_sites.begin(), sorted_sites.end(), s)) out.push_back(s);
  }
  return out;
}

/// For every basis index, its mixed-radix index over `sites` (in the order given).
inline std::vector<Index> subsystem_indices(const SiteDims& dims, const std::vector<int>& sites) {
  std::vector<Index> out(static_cast<std::size_t>(dims.total()));
  for (Index i = 0; i < dims.total(); ++i) {
    Index idx = 0;
    for (int s : sites) idx = idx * dims.dim(s) + dims.digit(i, s);
    out[static_cast<std::size_t>(i)] = idx;
  }
  return out;
}

/// Positional contribution of `sites` to every basis index (sum of digit*stride).
inline std::vector<Index> positional_part(const SiteDims& dims, const std::vector<int>& sites) {
  std::vector<Index> out(static_cast<std::size_t>(dims.total()));
  for (Index i = 0; i < dims.total(); ++i) {
    Index part = 0;
    for (int s : sites) part += dims.digit(i, s) * dims.stride(s);
    out[static_cast<std::size_t>(i)] = part;
  }
  return out;
}

inline void check_permutation(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation: wrong length");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("permutation: not a permutation of the sites");
    seen[p] = true;
  }
}

/// Basis map old index -> new index for the relabeling where new site i holds old site perm[i].
inline std::vector<Index> reorder_map(const SiteDims& dims, const std::vector<int>& perm) {
  return subsystem_indices(dims, perm);
}

/// Applies a d×d operator to one site of the row space of m (m is D×cols).
inline void left_apply_site(Matrix& m, const SiteDims& dims, int site, const Matrix& op) {
  const int d = dims.dim(site);
  const Index stride = dims.stride(site);
  Matrix gathered(d, m.cols());
  for (Index base = 0; base < dims.total(); ++base) {
    if (dims.digit(base, site) != 0) continue;
    for (int j = 0; j < d; ++j) gathered.row(j) = m.row(base + j * stride);
    const Matrix mixed = op * gathered;
    for (int j = 0; j < d; ++j) m.row(base + j * stride) = mixed.row(j);
  }
}

}  // namespace detail

class PureState {
 public:
  PureState(SiteDims dims, Vector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (amps_.size() != dims_.total()) {
      throw std::invalid_argument("PureState: amplitude vector length " + std::to_string(amps_.size()) +
                                  " does not match total dimension " + std::to_string(dims_.total()));
    }
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
      throw std::invalid_argument("PureState: amplitudes not normalized (norm " + std::to_string(norm) + ")");
    }
  }

  /// Rescales `amplitudes` to unit norm first.
  static PureState normalized(SiteDims dims, Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("PureState: zero vector");
    amplitudes /= norm;
    return PureState(std::move(dims), std::move(amplitudes));
  }

  /// Computational basis state |digits⟩.
  static PureState basis(SiteDims dims, const std::vector<int>& digits) {
    if (static_cast<int>(digits.size()) != dims.sites()) throw std::invalid_argument("PureState::basis: wrong digit count");
    Index idx = 0;
    for (int s = 0; s < dims.sites(); ++s) {
      if (digits[s] < 0 || digits[s] >= dims.dim(s)) throw std::out_of_range("PureState::basis: digit out of range");
      idx += digits[s] * dims.stride(s);
    }
    Vector v = Vector::Zero(dims.total());
    v(idx) = 1.0;
    return PureState(std::move(dims), std::move(v));
  }

  const SiteDims& dims() const { return dims_; }
  const Vector& amplitudes() const { return amps_; }
  int sites() const { return dims_.sites(); }

 private:
  SiteDims dims_;
  Vector amps_;
};

/// Tag selecting the non-validating DensityMatrix constructor, for matrices
/// produced by operations that preserve the invariants by construction.
struct unchecked_t {
  explicit unchecked_t() = default;
};
inline constexpr unchecked_t unchecked{};

class DensityMatrix {
 public:
  DensityMatrix(SiteDims dims, Matrix matrix) : dims_(std::move(dims)), m_(std::move(matrix)) {
    if (auto why = invariant_violation(dims_, m_)) throw std::invalid_argument("DensityMatrix: " + *why);
  }
  DensityMatrix(SiteDims dims, Matrix matrix, unchecked_t) : dims_(std::move(dims)), m_(std::move(matrix)) {}

  const SiteDims& dims() const { return dims_; }
  const Matrix& matrix() const { return m_; }
  int sites() const { return dims_.sites(); }

  /// Describes the first violated invariant, or nullopt if `m` is a valid state.
  static std::optional<std::string> invariant_violation(const SiteDims& dims, const Matrix& m) {
    if (m.rows() != dims.total() || m.cols() != dims.total()) {
      return "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected side " +
             std::to_string(dims.total());
    }
    if (!m.allFinite()) return std::string("non-finite entries");
    const double herm = hermiticity_defect(m);
    if (herm > kHermitianTol) return "not Hermitian (max deviation " + std::to_string(herm) + ")";
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) return "trace is " + std::to_string(tr) + ", expected 1";
    const double min_eig = hermitian_eigenvalues(m).minCoeff();
    if (min_eig < -kPsdTol) return "not positive semidefinite (minimum eigenvalue " + std::to_string(min_eig) + ")";
    return std::nullopt;
  }

 private:
  SiteDims dims_;
  Matrix m_;
};

class LocalUnitarySet {
 public:
  LocalUnitarySet(SiteDims dims, std::vector<Matrix> unitaries) : dims_(std::move(dims)), us_(std::move(unitaries)) {
    if (static_cast<int>(us_.size()) != dims_.sites()) {
      throw std::invalid_argument("LocalUnitarySet: need one unitary per site");
    }
    for (int s = 0; s < dims_.sites(); ++s) {
      const Matrix& u = us_[s];
      if (u.rows() != dims_.dim(s) || u.cols() != dims_.dim(s)) {
        throw std::invalid_argument("LocalUnitarySet: unitary for site " + std::to_string(s) + " has wrong size");
      }
      const double defect = (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
      if (defect > kUnitaryTol) {
        throw std::invalid_argument("LocalUnitarySet: matrix for site " + std::to_string(s) + " is not unitary");
      }
    }
  }

  static LocalUnitarySet identity(const SiteDims& dims) {
    std::vector<Matrix> us;
    for (int d : dims.values()) us.push_back(Matrix::Identity(d, d));
    return LocalUnitarySet(dims, std::move(us));
  }

  static LocalUnitarySet haar(const SiteDims& dims, Rng& rng) {
    std::vector<Matrix> us;
    for (int d : dims.values()) us.push_back(haar_unitary(d, rng));
    return LocalUnitarySet(dims, std::move(us));
  }

  const SiteDims& dims() const { return dims_; }
  const Matrix& operator[](int site) const { return us_.at(site); }

 private:
  SiteDims dims_;
  std::vector<Matrix> us_;
};

inline PureState tensor(const PureState& a, const PureState& b) {
  std::vector<int> dims = a.dims().values();
  dims.insert(dims.end(), b.dims().values().begin(), b.dims().values().end());
  const Vector& x = a.amplitudes();
  const Vector& y = b.amplitudes();
  Vector v(x.size() * y.size());
  for (Index i = 0; i < x.size(); ++i) v.segment(i * y.size(), y.size()) = x(i) * y;
  return PureState::normalized(SiteDims(std::move(dims)), std::move(v));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims().values();
  dims.insert(dims.end(), b.dims().values().begin(), b.dims().values().end());
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix m(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) m.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return DensityMatrix(SiteDims(std::move(dims)), std::move(m), unchecked);
}

/// |ψ⟩⟨ψ|.
inline DensityMatrix to_density(const PureState& psi) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(psi.dims(), v * v.adjoint(), unchecked);
}

inline double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

/// Numerical rank: eigenvalues above kRankTol.
inline int rank(const DensityMatrix& rho) {
  const RealVector ev = hermitian_eigenvalues(rho.matrix());
  return static_cast<int>((ev.array() > kRankTol).count());
}

/// The state vector of a rank-1 density matrix (global phase chosen so the
/// largest-magnitude amplitude is real and positive), or nullopt if mixed.
inline std::optional<PureState> as_pure(const DensityMatrix& rho, double tol = 1e-10) {
  if (std::abs(purity(rho) - 1.0) > tol) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Vector v = es.eigenvectors().col(es.eigenvectors().cols() - 1);
  Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  v *= std::conj(v(at)) / std::abs(v(at));
  return PureState::normalized(rho.dims(), std::move(v));
}

/// ρ reduced to the sites in `keep` (original site order preserved).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const SiteDims& dims = rho.dims();
  keep = detail::checked_sites(dims, std::move(keep), "partial_trace");
  const std::vector<int> traced = detail::complement_sites(dims, keep);
  const std::vector<Index> kidx = detail::subsystem_indices(dims, keep);
  const std::vector<Index> tidx = detail::subsystem_indices(dims, traced);
  const Index dk = dims.subsystem_dim(keep);
  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(dk, dk);
  for (Index i = 0; i < dims.total(); ++i) {
    for (Index j = 0; j < dims.total(); ++j) {
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += m(i, j);
    }
  }
  return DensityMatrix(dims.select(keep), hermitian_part(out), unchecked);
}

/// Amplitudes of ψ reshaped to a (dim keep) × (dim rest) matrix.
inline Matrix bipartite_reshape(const PureState& psi, const std::vector<int>& keep_sorted) {
  const SiteDims& dims = psi.dims();
  const std::vector<int> rest = detail::complement_sites(dims, keep_sorted);
  const Index dk = dims.subsystem_dim(keep_sorted);
  const Index dr = dims.subsystem_dim(rest);
  Matrix out(dk, dr);
  const Vector& v = psi.amplitudes();
  for (Index i = 0; i < dims.total(); ++i) {
    Index a = 0, b = 0;
    for (int s = 0; s < dims.sites(); ++s) {
      const int x = dims.digit(i, s);
      if (std::binary_search(keep_sorted.begin(), keep_sorted.end(), s)) {
        a = a * dims.dim(s) + x;
      } else {
        b = b * dims.dim(s) + x;
      }
    }
    out(a, b) = v(i);
  }
  return out;
}

/// Reduced state of a pure state: ρ_keep = M M† with M the bipartite reshape.
inline DensityMatrix reduced_density(const PureState& psi, std::vector<int> keep) {
  keep = detail::checked_sites(psi.dims(), std::move(keep), "reduced_density");
  const Matrix mm = bipartite_reshape(psi, keep);
  return DensityMatrix(psi.dims().select(keep), hermitian_part(mm * mm.adjoint()), unchecked);
}

/// Partial transpose over every site in `sites`.
inline Matrix partial_transpose(const DensityMatrix& rho, std::vector<int> sites) {
  const SiteDims& dims = rho.dims();
  sites = detail::checked_sites(dims, std::move(sites), "partial_transpose", true);
  const std::vector<Index> part = detail::positional_part(dims, sites);
  const Matrix& m = rho.matrix();
  const Index total = dims.total();
  Matrix out(total, total);
  for (Index i = 0; i < total; ++i) {
    for (Index j = 0; j < total; ++j) {
      out(i - part[i] + part[j], j - part[j] + part[i]) = m(i, j);
    }
  }
  return out;
}

/// ρ^{T_p}: partial transpose on a single site p.
inline Matrix partial_transpose(const DensityMatrix& rho, int site) {
  if (site < 0 || site >= rho.sites()) {
    throw std::out_of_range("partial_transpose: site index " + std::to_string(site) + " out of range");
  }
  return partial_transpose(rho, std::vector<int>{site});
}

/// Realignment across a bipartition A|B (A = the block holding site 0):
/// R_{(i,j),(k,l)} = ρ_{(i,k),(j,l)} with i,j indexing A and k,l indexing B.
inline Matrix realign(const DensityMatrix& rho, const Partition& bipartition) {
  if (bipartition.size() != 2) throw std::invalid_argument("realign: partition must have exactly 2 blocks");
  const SiteDims& dims = rho.dims();
  if (bipartition.sites() != dims.sites()) throw std::invalid_argument("realign: partition does not match site count");
  const std::vector<Index> aidx = detail::subsystem_indices(dims, bipartition.block(0));
  const std::vector<Index> bidx = detail::subsystem_indices(dims, bipartition.block(1));
  const Index da = dims.subsystem_dim(bipartition.block(0));
  const Index db = dims.subsystem_dim(bipartition.block(1));
  const Matrix& m = rho.matrix();
  Matrix out(da * da, db * db);
  for (Index x = 0; x < dims.total(); ++x) {
    for (Index y = 0; y < dims.total(); ++y) {
      out(aidx[x] * da + aidx[y], bidx[x] * db + bidx[y]) = m(x, y);
    }
  }
  return out;
}

/// Π ρ Π† where new site i carries old site perm[i]. Requires d_i = d_perm[i].
inline DensityMatrix permute_sites(const DensityMatrix& rho, const std::vector<int>& perm) {
  const SiteDims& dims = rho.dims();
  detail::check_permutation(perm, dims.sites());
  for (int i = 0; i < dims.sites(); ++i) {
    if (dims.dim(i) != dims.dim(perm[i])) {
      throw std::invalid_argument("permute_sites: local dimensions are not compatible with the permutation");
    }
  }
  const std::vector<Index> map = detail::reorder_map(dims, perm);
  const Matrix& m = rho.matrix();
  Matrix out(dims.total(), dims.total());
  for (Index i = 0; i < dims.total(); ++i)
    for (Index j = 0; j < dims.total(); ++j) out(map[i], map[j]) = m(i, j);
  return DensityMatrix(dims, std::move(out), unchecked);
}

inline PureState permute_sites(const PureState& psi, const std::vector<int>& perm) {
  const SiteDims& dims = psi.dims();
  detail::check_permutation(perm, dims.sites());
  for (int i = 0; i < dims.sites(); ++i) {
    if (dims.dim(i) != dims.dim(perm[i])) {
      throw std::invalid_argument("permute_sites: local dimensions are not compatible with the permutation");
    }
  }
  const std::vector<Index> map = detail::reorder_map(dims, perm);
  Vector out(dims.total());
  for (Index i = 0; i < dims.total(); ++i) out(map[i]) = psi.amplitudes()(i);
  return PureState(dims, std::move(out));
}

inline constexpr int kMaxPiSites = 8;

/// Permutationally invariant part (1/n!) Σ_π Π ρ Π†, by explicit sum over S_n.
inline DensityMatrix pi_part(const DensityMatrix& rho) {
  const SiteDims& dims = rho.dims();
  if (!dims.is_uniform()) throw std::invalid_argument("pi_part: all local dimensions must be equal");
  const int n = dims.sites();
  if (n > kMaxPiSites) throw std::invalid_argument("pi_part: at most " + std::to_string(kMaxPiSites) + " sites");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const Matrix& m = rho.matrix();
  const Index total = dims.total();
  Matrix acc = Matrix::Zero(total, total);
  long count = 0;
  do {
    const std::vector<Index> map = detail::reorder_map(dims, perm);
    for (Index i = 0; i < total; ++i)
      for (Index j = 0; j < total; ++j) acc(map[i], map[j]) += m(i, j);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  acc /= static_cast<double>(count);
  return DensityMatrix(dims, hermitian_part(acc), unchecked);
}

/// (⊗U_i) ρ (⊗U_i)†.
inline DensityMatrix apply_local_unitaries(const DensityMatrix& rho, const LocalUnitarySet& u) {
  if (!(rho.dims() == u.dims())) throw std::invalid_argument("apply_local_unitaries: dimension mismatch");
  const SiteDims& dims = rho.dims();
  Matrix m = rho.matrix();
  for (int s = 0; s < dims.sites(); ++s) detail::left_apply_site(m, dims, s, u[s]);
  Matrix mt = m.adjoint();
  for (int s = 0; s < dims.sites(); ++s) detail::left_apply_site(mt, dims, s, u[s]);
  return DensityMatrix(dims, hermitian_part(mt.adjoint()), unchecked);
}

inline PureState apply_local_unitaries(const PureState& psi, const LocalUnitarySet& u) {
  if (!(psi.dims() == u.dims())) throw std::invalid_argument("apply_local_unitaries: dimension mismatch");
  Matrix v = psi.amplitudes();
  for (int s = 0; s < psi.sites(); ++s) detail::left_apply_site(v, psi.dims(), s, u[s]);
  return PureState::normalized(psi.dims(), v.col(0));
}

}  // namespace entanglemeter
