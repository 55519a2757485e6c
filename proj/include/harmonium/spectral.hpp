#pragma once

// Exact diagonalization of the 2D relative-coordinate oscillator plus -g0/r in
// the |n, +-l> angular-momentum basis, coherent-state expansions, propagation
// and the distance test against the perturbative and harmonic comparators.
//
// Basis functions (energy 2n + |l| + 1):
//   psi_{n,l}(r, theta) = sqrt(2 n! / (n+|l|)!) r^|l| e^{-r^2/2} L_n^|l|(r^2) e^{i l theta} / sqrt(2 pi)

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "harmonium/core_model.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/numerics.hpp"
#include "harmonium/perturbation.hpp"
#include "harmonium/potential.hpp"

namespace harmonium::spectral {

enum class Sign { plus, minus, both };

struct BasisSpec {
  int n_max = 12;
  int l_max = 0;
  Sign sign = Sign::both;

  int block_size() const { return n_max + 1; }
  int l_min() const { return sign == Sign::plus ? 0 : -l_max; }
  int l_top() const { return sign == Sign::minus ? 0 : l_max; }
  int signed_blocks() const { return l_top() - l_min() + 1; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

inline void check_spec(const BasisSpec& spec) {
  if (spec.n_max < 0 || spec.l_max < 0) {
    throw DomainError(fmt::format("spectral basis needs n_max >= 0 and l_max >= 0 (got {}, {})",
                                  spec.n_max, spec.l_max));
  }
}

/// l_max = ceil(|alpha|^2 + 8|alpha| + 10), n_max = 12.
inline BasisSpec default_spec(double alpha, Sign sign = Sign::both) {
  const double a = std::abs(alpha);
  const double l_max = std::ceil(a * a + 8.0 * a + 10.0);
  if (!(l_max <= 1e6)) throw DomainError(fmt::format("default_spec: alpha = {} is too large for a spectral basis", alpha));
  return {12, static_cast<int>(l_max), sign};
}

inline constexpr double kTruncationLoss = 1e-8;

// ---------------------------------------------------------------------------
// Generalized Gauss-Laguerre rule

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> log_weights;  // log of the weights for x^a e^{-x}
};

/// L_n^a(x) together with L_{n-1}^a(x).
inline std::pair<double, double> laguerre_pair(int n, double a, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

inline double laguerre(int n, double a, double x) { return laguerre_pair(n, a, x).first; }

/// N-point rule for the weight x^a e^{-x} on (0, inf), a > -1: Golub-Welsch
/// eigenvalues of the Jacobi matrix, polished by Newton on L_N^a.
inline QuadratureRule gauss_laguerre(int n, double a) {
  if (n < 1 || !(a > -1.0)) {
    throw NumericalError(fmt::format("gauss_laguerre: need N >= 1 and a > -1 (N={}, a={})", n, a));
  }
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) diag(i) = 2.0 * i + a + 1.0;
  for (int i = 1; i < n; ++i) sub(i - 1) = std::sqrt(i * (i + a));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("gauss_laguerre: Jacobi eigensolver failed");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);
  const double log_norm = std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double deriv = 0.0;
    for (int it = 0; it < 8; ++it) {
      const auto [ln, lm] = laguerre_pair(n, a, x);
      deriv = (n * ln - (n + a) * lm) / x;
      const double step = ln / deriv;
      x -= step;
      if (std::abs(step) <= 1e-15 * x) break;
    }
    const auto [ln, lm] = laguerre_pair(n, a, x);
    deriv = (n * ln - (n + a) * lm) / x;
    if (!(x > 0) || !std::isfinite(deriv) || deriv == 0.0) {
      throw NumericalError(fmt::format("gauss_laguerre: node {} failed to converge (N={}, a={})", i, n, a));
    }
    rule.nodes[i] = x;
    rule.log_weights[i] = log_norm - std::log(x) - 2.0 * std::log(std::abs(deriv));
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Interaction matrix elements

using Block = Eigen::MatrixXd;

/// V^{(l)}_{nm} = <n, l| -g0/r |m, l> for l = 0..l_max; the interaction
/// conserves angular momentum so only these diagonal-in-l blocks exist.
inline Block potential_block(double g0, int n_max, int l) {
  const int dim = n_max + 1;
  Block v = Block::Zero(dim, dim);
  if (g0 == 0.0) return v;
  const double a = l - 0.5;
  const QuadratureRule rule = gauss_laguerre(n_max + 8, a);
  // g_n(x) = L_n^l(x) sqrt(n! l! / (n+l)!) keeps the pieces O(1) for large l.
  const double lg_l = std::lgamma(l + 1.0);
  Eigen::MatrixXd g(rule.nodes.size(), dim);
  Eigen::VectorXd w(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    w(i) = std::exp(rule.log_weights[i] - lg_l);
    double prev = 0.0;
    double cur = 1.0;
    for (int n = 0; n <= n_max; ++n) {
      const double scale = 0.5 * (std::lgamma(n + 1.0) + lg_l - std::lgamma(n + l + 1.0));
      g(i, n) = cur * std::exp(scale);
      const double next = ((2.0 * n + 1.0 + l - x) * cur - (n + l) * prev) / (n + 1.0);
      prev = cur;
      cur = next;
    }
  }
  v = -g0 * g.transpose() * w.asDiagonal() * g;
  return 0.5 * (v + v.transpose());
}

inline std::vector<Block> potential_matrix_elements(double g0, const BasisSpec& spec) {
  check_spec(spec);
  std::vector<Block> blocks;
  blocks.reserve(spec.l_max + 1);
  for (int l = 0; l <= spec.l_max; ++l) blocks.push_back(potential_block(g0, spec.n_max, l));
  return blocks;
}

// ---------------------------------------------------------------------------
// Model

struct EigenBlock {
  Eigen::VectorXd energies;   // ascending
  Eigen::MatrixXd vectors;    // columns are eigenvectors
  Block hamiltonian;
};

struct SpectralModel {
  double g0 = 0.0;
  BasisSpec spec;
  std::vector<EigenBlock> blocks;  // indexed by |l|

  const EigenBlock& block(int l) const { return blocks.at(static_cast<std::size_t>(std::abs(l))); }
};

namespace detail {

inline constexpr char kCacheMagic[8] = {'H', 'R', 'M', 'S', 'P', 'E', 'C', '\0'};
inline constexpr std::uint32_t kCacheVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) return false;
  v = to_little(v);
  return true;
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, double g0, const BasisSpec& spec) {
  return dir / fmt::format("spectral_{:016x}_n{}_l{}.bin", std::bit_cast<std::uint64_t>(g0), spec.n_max,
                           spec.l_max);
}

inline std::optional<std::vector<EigenBlock>> load_cache(const std::filesystem::path& file, double g0,
                                                         const BasisSpec& spec) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kCacheMagic, 8) != 0) return std::nullopt;
  std::uint32_t version = 0;
  std::int32_t n_max = 0;
  std::int32_t l_max = 0;
  std::uint64_t g0_bits = 0;
  if (!get(is, version) || !get(is, n_max) || !get(is, l_max) || !get(is, g0_bits)) return std::nullopt;
  if (version != kCacheVersion || n_max != spec.n_max || l_max != spec.l_max ||
      g0_bits != std::bit_cast<std::uint64_t>(g0)) {
    return std::nullopt;
  }
  const int dim = spec.block_size();
  std::vector<EigenBlock> blocks(spec.l_max + 1);
  for (auto& b : blocks) {
    b.energies.resize(dim);
    b.vectors.resize(dim, dim);
    b.hamiltonian.resize(dim, dim);
    for (int i = 0; i < dim; ++i)
      if (!get(is, b.energies(i))) return std::nullopt;
    for (Eigen::Index i = 0; i < b.vectors.size(); ++i)
      if (!get(is, b.vectors.data()[i])) return std::nullopt;
    for (Eigen::Index i = 0; i < b.hamiltonian.size(); ++i)
      if (!get(is, b.hamiltonian.data()[i])) return std::nullopt;
  }
  return blocks;
}

inline void store_cache(const std::filesystem::path& file, double g0, const BasisSpec& spec,
                        const std::vector<EigenBlock>& blocks) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) return;  // the cache is optional
    os.write(kCacheMagic, 8);
    put(os, kCacheVersion);
    put(os, static_cast<std::int32_t>(spec.n_max));
    put(os, static_cast<std::int32_t>(spec.l_max));
    put(os, std::bit_cast<std::uint64_t>(g0));
    for (const auto& b : blocks) {
      for (Eigen::Index i = 0; i < b.energies.size(); ++i) put(os, b.energies(i));
      for (Eigen::Index i = 0; i < b.vectors.size(); ++i) put(os, b.vectors.data()[i]);
      for (Eigen::Index i = 0; i < b.hamiltonian.size(); ++i) put(os, b.hamiltonian.data()[i]);
    }
    if (!os) return;
  }
  std::filesystem::rename(tmp, file, ec);
}

}  // namespace detail

/// Cache directory from HARMONIUM_CACHE_DIR, if set.
inline std::optional<std::filesystem::path> default_cache_dir() {
  if (const char* env = std::getenv("HARMONIUM_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

inline EigenBlock diagonalize_block(double g0, int n_max, int l) {
  EigenBlock b;
  b.hamiltonian = potential_block(g0, n_max, l);
  for (int n = 0; n <= n_max; ++n) b.hamiltonian(n, n) += 2.0 * n + l + 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.hamiltonian);
  if (es.info() != Eigen::Success) {
    throw NumericalError(fmt::format("eigensolver did not converge for block l = {}", l));
  }
  b.energies = es.eigenvalues();
  b.vectors = es.eigenvectors();
  return b;
}

/// Per-l Hamiltonians H = (2n + l + 1) + V and their eigendecompositions.
/// Blocks are independent and built concurrently.
inline SpectralModel build_and_diagonalize(double g0, const BasisSpec& spec,
                                           std::optional<std::filesystem::path> cache_dir = default_cache_dir()) {
  check_spec(spec);
  SpectralModel m;
  m.g0 = g0;
  m.spec = spec;
  std::filesystem::path file;
  if (cache_dir) {
    file = detail::cache_file(*cache_dir, g0, spec);
    if (auto cached = detail::load_cache(file, g0, spec)) {
      m.blocks = std::move(*cached);
      return m;
    }
  }
  m.blocks.resize(spec.l_max + 1);
  numerics::parallel_for(spec.l_max + 1, [&](int l) { m.blocks[l] = diagonalize_block(g0, spec.n_max, l); });
  if (cache_dir) detail::store_cache(file, g0, spec, m.blocks);
  return m;
}

// ---------------------------------------------------------------------------
// States

struct SpectralState {
  BasisSpec spec;
  std::vector<Eigen::VectorXcd> blocks;  // signed l from spec.l_min() upwards
  double norm = 1.0;                     // captured norm of the untruncated state

  int index(int l) const { return l - spec.l_min(); }
  Eigen::VectorXcd& block(int l) { return blocks.at(index(l)); }
  const Eigen::VectorXcd& block(int l) const { return blocks.at(index(l)); }

  cplx coefficient(int n, int l) const { return block(l)(n); }

  double coefficient_norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
  }

  bool finite() const {
    for (const auto& b : blocks)
      if (!b.allFinite()) return false;
    return true;
  }
};

inline SpectralState zero_state(const BasisSpec& spec) {
  check_spec(spec);
  SpectralState s;
  s.spec = spec;
  s.blocks.assign(spec.signed_blocks(), Eigen::VectorXcd::Zero(spec.block_size()));
  s.norm = 0.0;
  return s;
}

namespace detail {

inline void finish_truncated(SpectralState& s, double alpha_scale, const std::string& what) {
  const double captured = s.coefficient_norm();
  if (!(captured * captured >= 1.0 - kTruncationLoss)) {
    const BasisSpec need = default_spec(alpha_scale);
    throw NumericalError(fmt::format(
        "{}: basis n_max={}, l_max={} captures only {:.3e} of the norm; need l_max >= {} (and n_max "
        "large enough for the radial spread)",
        what, s.spec.n_max, s.spec.l_max, captured * captured, std::max(need.l_max, s.spec.l_max + 1)),
        1.0 - captured * captured);
  }
  s.norm = captured;
}

}  // namespace detail

/// Elliptic-orbit coherent state |alpha, beta>_sign with coefficients
/// sqrt((n+l)!/n!) alpha^l beta^n / l! on |n, sign*l>, normalized by the
/// untruncated norm exp(|alpha|^2/(1-|beta|^2)) / (1-|beta|^2).  beta = 0
/// is the circular orbit (n = 0 only).
inline SpectralState coherent_state_vector(cplx alpha, cplx beta, Sign sign, const BasisSpec& spec) {
  if (sign == Sign::both) throw DomainError("coherent_state_vector: sign must be plus or minus");
  if (!(std::abs(beta) < 1.0)) throw DomainError(fmt::format("coherent_state_vector: |beta| = {} must be < 1", std::abs(beta)));
  if (spec.sign != Sign::both && spec.sign != sign) throw DomainError("coherent_state_vector: sign not in basis");
  SpectralState s = zero_state(spec);
  const double b2 = std::norm(beta);
  const double log_norm2 = std::norm(alpha) / (1.0 - b2) - std::log1p(-b2);
  const int dir = sign == Sign::plus ? 1 : -1;
  for (int l = 0; l <= spec.l_max; ++l) {
    if (l > 0 && alpha == 0.0) break;
    for (int n = 0; n <= spec.n_max; ++n) {
      if (n > 0 && beta == 0.0) break;
      double lg = 0.5 * (std::lgamma(n + l + 1.0) - std::lgamma(n + 1.0)) - std::lgamma(l + 1.0) - 0.5 * log_norm2;
      double arg = 0.0;
      if (l > 0) {
        lg += l * std::log(std::abs(alpha));
        arg += l * std::arg(alpha);
      }
      if (n > 0) {
        lg += n * std::log(std::abs(beta));
        arg += n * std::arg(beta);
      }
      s.block(dir * l)(n) = std::polar(std::exp(lg), arg);
    }
  }
  detail::finish_truncated(s, std::abs(alpha) / std::sqrt(1.0 - b2), "coherent_state_vector");
  return s;
}

/// Product coherent state of the two Cartesian modes with labels (ax, ay).
inline SpectralState cartesian_coherent_state(const CoherentLabel& label, const BasisSpec& spec) {
  if (spec.sign != Sign::both) throw DomainError("cartesian_coherent_state needs both signs in the basis");
  SpectralState s = zero_state(spec);
  const double s2 = std::numbers::sqrt2;
  const cplx u = (label.x - cplx(0, 1) * label.y) / s2;  // raises l
  const cplx v = (label.x + cplx(0, 1) * label.y) / s2;  // lowers l
  const double half = -0.5 * label.norm2();
  auto term = [&](cplx z, int k) -> std::pair<double, double> {
    if (k == 0) return {0.0, 0.0};
    if (z == 0.0) return {-INFINITY, 0.0};
    return {k * std::log(std::abs(z)), k * std::arg(z)};
  };
  for (int l = -spec.l_max; l <= spec.l_max; ++l) {
    const int al = std::abs(l);
    for (int n = 0; n <= spec.n_max; ++n) {
      const int np = l >= 0 ? n + al : n;  // quanta in the + circular mode
      const int nm = l >= 0 ? n : n + al;  // quanta in the - circular mode
      const auto [lu, au] = term(u, np);
      const auto [lv, av] = term(v, nm);
      const double lg = half + lu + lv - 0.5 * (std::lgamma(np + 1.0) + std::lgamma(nm + 1.0));
      const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
      s.block(l)(n) = sgn * std::polar(std::exp(lg), au + av);
    }
  }
  detail::finish_truncated(s, std::sqrt(label.norm2()), "cartesian_coherent_state");
  return s;
}

/// U(t) = P e^{-iEt} P^T applied blockwise.
inline SpectralState propagate(const SpectralModel& model, const SpectralState& state, double t) {
  if (!(model.spec.n_max == state.spec.n_max && model.spec.l_max == state.spec.l_max)) {
    throw DomainError("propagate: state and model use different truncations");
  }
  SpectralState out = state;
  for (int l = state.spec.l_min(); l <= state.spec.l_top(); ++l) {
    const EigenBlock& b = model.block(l);
    const Eigen::VectorXcd in = b.vectors.transpose().cast<cplx>() * state.block(l);
    Eigen::VectorXcd phased(in.size());
    for (Eigen::Index k = 0; k < in.size(); ++k) phased(k) = std::polar(1.0, -b.energies(k) * t) * in(k);
    out.block(l) = b.vectors.cast<cplx>() * phased;
  }
  return out;
}

inline cplx inner_product(const SpectralState& a, const SpectralState& b) {
  if (!(a.spec == b.spec)) {
    throw DomainError(fmt::format("inner_product: basis mismatch (n_max {} vs {}, l_max {} vs {})", a.spec.n_max,
                                  b.spec.n_max, a.spec.l_max, b.spec.l_max));
  }
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) s += a.blocks[i].dot(b.blocks[i]);
  return s;
}

/// d = 1 - Re<a|b>, evaluated as |a - b|^2 / 2 plus the truncation defect so
/// that nearly equal states do not lose their difference to cancellation.
inline double state_distance(const SpectralState& a, const SpectralState& b) {
  if (!(a.spec == b.spec)) {
    throw DomainError(fmt::format("state_distance: basis mismatch (n_max {} vs {}, l_max {} vs {})", a.spec.n_max,
                                  b.spec.n_max, a.spec.l_max, b.spec.l_max));
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) diff += (a.blocks[i] - b.blocks[i]).squaredNorm();
  return 0.5 * diff + (1.0 - 0.5 * (a.norm * a.norm + b.norm * b.norm));
}

inline SpectralState scaled(SpectralState s, cplx factor) {
  for (auto& b : s.blocks) b *= factor;
  return s;
}

/// <H> of the truncated state (per unit norm).
inline double energy_expectation(const SpectralModel& model, const SpectralState& s) {
  double e = 0.0;
  double n2 = 0.0;
  for (int l = s.spec.l_min(); l <= s.spec.l_top(); ++l) {
    const auto& c = s.block(l);
    e += (c.adjoint() * model.block(l).hamiltonian.cast<cplx>() * c)(0).real();
    n2 += c.squaredNorm();
  }
  return e / n2;
}

/// psi_{n,l}(x, y).
inline cplx basis_function(int n, int l, double x, double y) {
  const int al = std::abs(l);
  const double r2 = x * x + y * y;
  const double log_norm = 0.5 * (std::log(2.0) + std::lgamma(n + 1.0) - std::lgamma(n + al + 1.0)) -
                          0.5 * std::log(2.0 * std::numbers::pi);
  const double radial = (al == 0 ? 1.0 : std::pow(r2, 0.5 * al)) * std::exp(log_norm - 0.5 * r2) *
                        laguerre(n, al, r2);
  return std::polar(radial, l * std::atan2(y, x));
}

inline cplx wavefunction(const SpectralState& s, double x, double y) {
  const int al_max = s.spec.l_max;
  const double r2 = x * x + y * y;
  const double theta = std::atan2(y, x);
  cplx total = 0.0;
  for (int al = 0; al <= al_max; ++al) {
    // shared radial factors for +l and -l
    const double log_base = 0.5 * std::log(2.0) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * r2 +
                            (al == 0 ? 0.0 : 0.5 * al * std::log(r2));
    double prev = 0.0;
    double cur = 1.0;
    for (int n = 0; n <= s.spec.n_max; ++n) {
      const double radial = std::exp(log_base + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + al + 1.0))) * cur;
      for (int sgn = 1; sgn >= (al == 0 ? 1 : -1); sgn -= 2) {
        const int l = sgn * al;
        if (l < s.spec.l_min() || l > s.spec.l_top()) continue;
        total += s.block(l)(n) * std::polar(radial, l * theta);
      }
      const double next = ((2.0 * n + 1.0 + al - r2) * cur - (n + al) * prev) / (n + 1.0);
      prev = cur;
      cur = next;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Validation against the perturbative and harmonic comparators

struct ValidationResult {
  double alpha = 0.0;
  double g0 = 0.0;
  BasisSpec spec;
  std::vector<double> t;
  std::vector<double> d_gh;
  std::vector<double> d_sho;

  /// d_GH < d_SHO, where both vanishing (below 1e-14) counts as agreement.
  static bool row_passes(double gh, double sho) { return gh < sho || (gh <= 1e-14 && sho <= 1e-14); }

  bool pass() const {
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!row_passes(d_gh[i], d_sho[i])) return false;
    return true;
  }
};

/// Exact evolution of the constant-separation component |alpha> versus
///   GH:  e^{i dS_aa} e^{-it} |alpha e^{-i(1 + drift) t}>,
///   SHO: e^{-it} |alpha e^{-it}>,
/// with the drift taken from the averaged perturbation theory.
inline ValidationResult validate(double alpha, double g0_over_alpha, const std::vector<double>& t_grid,
                                 std::optional<BasisSpec> spec_in = std::nullopt,
                                 std::optional<std::filesystem::path> cache_dir = default_cache_dir()) {
  if (!(alpha > 0)) throw DomainError(fmt::format("validate: alpha must be > 0, got {}", alpha));
  BasisSpec spec = spec_in.value_or(default_spec(alpha, Sign::plus));
  spec.sign = Sign::plus;
  const double g0 = g0_over_alpha * alpha;
  const Potential pot = Potential::newtonian(g0);
  const DimensionlessParams params{g0, alpha};

  // drift of the circular orbit of radius alpha
  const double h = alpha / std::numbers::sqrt2;
  const ActionAngleState circ = ActionAngleState::from_label({cplx(h, 0.0), cplx(0.0, h)});
  const double drift = g0 == 0.0 ? 0.0 : averaged_drifts(pot, circ).phi_dot_x;

  const SpectralModel model = build_and_diagonalize(g0, spec, cache_dir);
  const SpectralState initial = coherent_state_vector(alpha, 0.0, Sign::plus, spec);

  ValidationResult r;
  r.alpha = alpha;
  r.g0 = g0;
  r.spec = spec;
  r.t = t_grid;
  r.d_gh.resize(t_grid.size());
  r.d_sho.resize(t_grid.size());
  numerics::parallel_for(static_cast<int>(t_grid.size()), [&](int i) {
    const double t = t_grid[i];
    if (!(t >= 0)) throw DomainError(fmt::format("validate: t must be >= 0, got {}", t));
    const SpectralState exact = propagate(model, initial, t);
    const SpectralState gh = scaled(
        coherent_state_vector(std::polar(alpha, -(1.0 + drift) * t), 0.0, Sign::plus, spec),
        std::polar(1.0, delta_S(pot, Branch::aa, params, t) - t));
    const SpectralState sho =
        scaled(coherent_state_vector(std::polar(alpha, -t), 0.0, Sign::plus, spec), std::polar(1.0, -t));
    r.d_gh[i] = state_distance(exact, gh);
    r.d_sho[i] = state_distance(exact, sho);
  });
  return r;
}

/// n log-spaced samples in [t_min, t_max].
inline std::vector<double> log_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0) || !(t_max >= t_min) || n < 2) {
    throw DomainError(fmt::format("log_grid: need 0 < t_min <= t_max and n >= 2 (got {}, {}, {})", t_min, t_max, n));
  }
  std::vector<double> t(n);
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (int i = 0; i < n; ++i) t[i] = std::exp(a + (b - a) * i / (n - 1));
  return t;
}

}  // namespace harmonium::spectral
