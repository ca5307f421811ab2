#pragma once

// Quadrature over the complex plane (Gauss-Laguerre in u = |z|^2 times a
// uniform angular rule) and over t, realizing the resolution-of-unity
// measures, Glauber reconstruction, and the distributional trace probe.

#include "coherent/coherent_ops.hpp"
#include "coherent/extended_ops.hpp"
#include "coherent/matrix_core.hpp"
#include "coherent/scalar_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace coherent {

/// |f(t)|^2 below this makes the extended measure degenerate.
inline constexpr double kDefaultFFloor = 1e-6;

struct QuadratureNode {
  double x = 0.0;
  double weight = 0.0;
};

namespace detail {

// L_n(x) and L_{n-1}(x), alpha = 0.
inline std::pair<double, double> laguerre_pair(int n, double x) {
  double prev = 1.0;
  double cur = 1.0 - x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// P_n(x) and P_n'(x).
inline std::pair<double, double> legendre_pair(int n, double x) {
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  const double derivative = n * (x * cur - prev) / (x * x - 1.0);
  return {cur, derivative};
}

}  // namespace detail

/// Gauss-Laguerre rule for int_0^inf e^{-u} p(u) du, exact through degree 2n-1.
/// Nodes start from the Golub-Welsch eigenvalues and are Newton-polished;
/// weights come from 1/(u L_n'(u)^2), which keeps small weights at large
/// nodes accurate to relative precision.
inline std::vector<QuadratureNode> gauss_laguerre(int n) {
  if (n < 1) throw PreconditionError(detail::concat("gauss_laguerre: need n >= 1, got ", n));
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) jacobi(i, i + 1) = jacobi(i + 1, i) = i + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  std::vector<QuadratureNode> nodes(n);
  for (int i = 0; i < n; ++i) {
    double u = eig.eigenvalues()[i];
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [ln, ln1] = detail::laguerre_pair(n, u);
      derivative = n * (ln - ln1) / u;
      const double step = ln / derivative;
      u -= step;
      if (std::abs(step) <= 1e-15 * std::abs(u)) break;
    }
    const auto [ln, ln1] = detail::laguerre_pair(n, u);
    derivative = n * (ln - ln1) / u;
    nodes[i] = {u, 1.0 / (u * derivative * derivative)};
  }
  return nodes;
}

/// Gauss-Legendre rule on [lo, hi].
inline std::vector<QuadratureNode> gauss_legendre(int n, double lo = -1.0, double hi = 1.0) {
  if (n < 1) throw PreconditionError(detail::concat("gauss_legendre: need n >= 1, got ", n));
  std::vector<QuadratureNode> nodes(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 1.0;
    if (n == 1) {
      x = 0.0;
      derivative = 1.0;
    } else {
      for (int iter = 0; iter < 100; ++iter) {
        const auto [p, dp] = detail::legendre_pair(n, x);
        derivative = dp;
        const double step = p / dp;
        x -= step;
        if (std::abs(step) <= 1e-16) break;
      }
      derivative = detail::legendre_pair(n, x).second;
    }
    const double w = n == 1 ? 2.0 : 2.0 / ((1.0 - x * x) * derivative * derivative);
    nodes[n - 1 - i] = {mid + half * x, half * w};
  }
  return nodes;
}

struct PolarNode {
  Complex z;
  double weight = 0.0;  // Sum weight * h(z) ~ int e^{-|z|^2} h(z) d^2z / pi
};

/// Tensor rule over C: Gauss-Laguerre in u = |z|^2 times M uniform angles.
/// Integrands e^{-|z|^2} z^a conj(z)^b are exact when a, b < min(2 n_rad, M).
class PolarQuadrature {
 public:
  PolarQuadrature(std::vector<QuadratureNode> radial, int angular_count)
      : radial_(std::move(radial)), angular_count_(angular_count) {
    nodes_.reserve(radial_.size() * static_cast<std::size_t>(angular_count_));
    for (const auto& r : radial_) {
      const double radius = std::sqrt(r.x);
      for (int k = 0; k < angular_count_; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / angular_count_;
        nodes_.push_back({std::polar(radius, theta), r.weight / angular_count_});
      }
    }
  }

  int radial_count() const { return static_cast<int>(radial_.size()); }
  int angular_count() const { return angular_count_; }
  const std::vector<QuadratureNode>& radial_nodes() const { return radial_; }
  const std::vector<PolarNode>& nodes() const { return nodes_; }

  /// Sum weight * h(z), approximating int e^{-|z|^2} h(z) d^2z / pi.
  template <typename Fn>
  auto integrate_weighted(Fn&& h) const {
    using Result = std::decay_t<decltype(h(Complex{}))>;
    Result sum = Result(h(nodes_.front().z) * 0.0);
    for (const auto& node : nodes_) sum += node.weight * h(node.z);
    return sum;
  }

  /// Approximates int F(z) d^2z / pi for integrands carrying their own e^{-|z|^2}.
  template <typename Fn>
  auto integrate(Fn&& f) const {
    return integrate_weighted([&](Complex z) { return std::exp(std::norm(z)) * f(z); });
  }

  /// True when the rule resolves every <m|z><z|n> with m, n < band.
  bool resolves(int band) const {
    return angular_count_ >= 2 * band + 1 && radial_count() >= band + 1;
  }

 private:
  std::vector<QuadratureNode> radial_;
  int angular_count_;
  std::vector<PolarNode> nodes_;
};

inline PolarQuadrature build_polar_grid(int n_rad, int angular_count) {
  if (n_rad < 1)
    throw PreconditionError(detail::concat("build_polar_grid: need n_rad >= 1, got ", n_rad));
  if (angular_count < 3)
    throw PreconditionError(detail::concat("build_polar_grid: need M >= 3, got ", angular_count));
  return PolarQuadrature(gauss_laguerre(n_rad), angular_count);
}

namespace detail {

inline void require_resolved(const PolarQuadrature& grid, int band) {
  if (!grid.resolves(band))
    throw PreconditionError(concat("polar grid under-resolved for band ", band, ": need n_rad >= ",
                                   band + 1, " and M >= ", 2 * band + 1, ", got n_rad = ",
                                   grid.radial_count(), ", M = ", grid.angular_count()));
}

inline void require_measure(double t, double f_floor) {
  const double abs_f_sq = abs_f_squared(t);
  if (abs_f_sq < f_floor)
    throw DomainError(concat("extended measure degenerate at t = ", t, ": |f(t)|^2 = ", abs_f_sq,
                             " < f_floor = ", f_floor));
}

// Sum_i weight_i e^{|w_i|^2} |z_i,t><z_i,t| over w-nodes, z_i = w_i / f(t):
// the |f(t)|^2 d^2z measure written as d^2w.
inline ComplexMatrix extended_projector_sum(double t, int band, const PolarQuadrature& grid) {
  const Complex f = f_of_t(t);
  ComplexMatrix sum = ComplexMatrix::Zero(band, band);
  for (const auto& node : grid.nodes()) {
    const ComplexVector v = extended_state_amplitudes({node.z / f, t}, band);
    sum.noalias() += (node.weight * std::exp(std::norm(node.z))) * (v * v.adjoint());
  }
  return sum;
}

}  // namespace detail

/// Sum over the grid of |z><z| on band B (standard measure d^2z / pi).
inline ComplexMatrix coherent_resolution_matrix(const TruncationConfig& cfg,
                                                const PolarQuadrature& grid) {
  detail::require_resolved(grid, cfg.band);
  ComplexMatrix sum = ComplexMatrix::Zero(cfg.band, cfg.band);
  for (const auto& node : grid.nodes()) {
    const ComplexVector v = coherent_amplitudes(node.z, cfg.band);
    sum.noalias() += (node.weight * std::exp(std::norm(node.z))) * (v * v.adjoint());
  }
  return sum;
}

inline double resolution_residual_coherent(const TruncationConfig& cfg,
                                           const PolarQuadrature& grid) {
  const ComplexMatrix sum = coherent_resolution_matrix(cfg, grid);
  return max_entry(sum - ComplexMatrix::Identity(cfg.band, cfg.band));
}

/// int |f(t)|^2 d^2z / pi |z,t><z,t| on band B, with nodes placed in w = f(t) z.
inline ComplexMatrix extended_resolution_matrix(double t, const TruncationConfig& cfg,
                                                const PolarQuadrature& grid,
                                                double f_floor = kDefaultFFloor) {
  detail::require_measure(t, f_floor);
  detail::require_resolved(grid, cfg.band);
  return detail::extended_projector_sum(t, cfg.band, grid);
}

/// Same integral on a plain z-grid: Gauss-Legendre in r over [0, radius] times
/// angular_count uniform angles, weighted by |f(t)|^2 r dr dtheta / pi.
inline ComplexMatrix extended_resolution_matrix_direct(double t, const TruncationConfig& cfg,
                                                       int radial_count, double radius,
                                                       int angular_count,
                                                       double f_floor = kDefaultFFloor) {
  detail::require_measure(t, f_floor);
  if (angular_count < 2 * cfg.band + 1)
    throw PreconditionError(detail::concat("direct grid needs M >= ", 2 * cfg.band + 1));
  const double abs_f_sq = abs_f_squared(t);
  ComplexMatrix sum = ComplexMatrix::Zero(cfg.band, cfg.band);
  for (const auto& r : gauss_legendre(radial_count, 0.0, radius)) {
    for (int k = 0; k < angular_count; ++k) {
      const Complex z = std::polar(r.x, 2.0 * std::numbers::pi * k / angular_count);
      const ComplexVector v = extended_state_amplitudes({z, t}, cfg.band);
      const double w = abs_f_sq * r.x * r.weight * 2.0 / angular_count;
      sum.noalias() += w * (v * v.adjoint());
    }
  }
  return sum;
}

inline double resolution_residual_extended(double t, const TruncationConfig& cfg,
                                           const PolarQuadrature& grid,
                                           double f_floor = kDefaultFFloor) {
  const ComplexMatrix sum = extended_resolution_matrix(t, cfg, grid, f_floor);
  return max_entry(sum - ComplexMatrix::Identity(cfg.band, cfg.band));
}

/// Quadrature for int_R e^{-|t|}/2 dt that skips windows around the zeros of
/// f(t) (t in 2 pi Z \ {0}) and the tail |t| > T. The skipped e^{-|t|}/2 mass
/// is reported as defect_bound().
class LineQuadratureT {
 public:
  LineQuadratureT(std::vector<QuadratureNode> nodes,
                  std::vector<std::pair<double, double>> excluded, double excluded_mass)
      : nodes_(std::move(nodes)), excluded_(std::move(excluded)), excluded_mass_(excluded_mass) {
    for (const auto& n : nodes_) {
      if (!(n.weight > 0.0))
        throw PreconditionError(detail::concat("LineQuadratureT: non-positive weight at t = ", n.x));
    }
  }

  /// One node at t with the given weight and nothing excluded.
  static LineQuadratureT single(double t, double weight = 1.0) {
    return LineQuadratureT({{t, weight}}, {}, 0.0);
  }

  const std::vector<QuadratureNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<double, double>>& excluded() const { return excluded_; }
  /// e^{-|t|}/2 mass of the excluded windows plus the tail beyond T.
  double defect_bound() const { return excluded_mass_; }

  double total_weight() const {
    double sum = 0.0;
    for (const auto& n : nodes_) sum += n.weight;
    return sum;
  }

 private:
  std::vector<QuadratureNode> nodes_;
  std::vector<std::pair<double, double>> excluded_;
  double excluded_mass_;
};

struct LineQuadratureOptions {
  double cutoff = 30.0;        // T
  double half_width = 0.05;    // window half-width around each 2 pi k, k != 0
  int nodes_per_segment = 24;  // Gauss-Legendre nodes between breakpoints
  double f_floor = kDefaultFFloor;
};

inline LineQuadratureT build_line_quadrature_t(const LineQuadratureOptions& opt = {}) {
  if (!(opt.cutoff > 0.0) || !(opt.half_width > 0.0) || opt.nodes_per_segment < 1)
    throw PreconditionError("build_line_quadrature_t: cutoff, half_width and node count must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  if (opt.half_width >= std::numbers::pi)
    throw PreconditionError("build_line_quadrature_t: windows overlap (half_width >= pi)");

  // Mass of e^{-t}/2 on [lo, hi] for 0 <= lo <= hi.
  const auto half_mass = [](double lo, double hi) { return 0.5 * (std::exp(-lo) - std::exp(-hi)); };

  std::vector<std::pair<double, double>> windows;  // positive side only
  double excluded = std::exp(-opt.cutoff);         // both tails: 2 * e^{-T}/2
  for (int k = 1; two_pi * k - opt.half_width < opt.cutoff; ++k) {
    const double lo = two_pi * k - opt.half_width;
    const double hi = std::min(two_pi * k + opt.half_width, opt.cutoff);
    windows.emplace_back(lo, hi);
    excluded += 2.0 * half_mass(lo, hi);
  }

  // Kept positive segments, mirrored to the negative side.
  std::vector<std::pair<double, double>> segments;
  double start = 0.0;
  for (const auto& [lo, hi] : windows) {
    segments.emplace_back(start, lo);
    start = hi;
  }
  if (start < opt.cutoff) segments.emplace_back(start, opt.cutoff);

  std::vector<QuadratureNode> nodes;
  for (const auto& [lo, hi] : segments) {
    for (const auto& q : gauss_legendre(opt.nodes_per_segment, lo, hi)) {
      const double w = 0.5 * std::exp(-q.x) * q.weight;
      nodes.push_back({-q.x, w});
      nodes.push_back({q.x, w});
    }
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const QuadratureNode& a, const QuadratureNode& b) { return a.x < b.x; });
  for (const auto& n : nodes) detail::require_measure(n.x, opt.f_floor);

  std::vector<std::pair<double, double>> all_windows;
  for (auto it = windows.rbegin(); it != windows.rend(); ++it)
    all_windows.emplace_back(-it->second, -it->first);
  all_windows.insert(all_windows.end(), windows.begin(), windows.end());
  return LineQuadratureT(std::move(nodes), std::move(all_windows), excluded);
}

/// Residual of Sum_t W_t |f(t)|^2 [int d^2z/pi |z,t><z,t|] - I on band B.
inline double resolution_residual_t_integrated(const TruncationConfig& cfg,
                                               const PolarQuadrature& grid_z,
                                               const LineQuadratureT& grid_t,
                                               double f_floor = kDefaultFFloor) {
  detail::require_resolved(grid_z, cfg.band);
  ComplexMatrix total = ComplexMatrix::Zero(cfg.band, cfg.band);
  for (const auto& node : grid_t.nodes()) {
    detail::require_measure(node.x, f_floor);
    const double abs_f_sq = abs_f_squared(node.x);
    // Inner integral in the plain d^2z/pi measure; d^2z = d^2w / |f|^2.
    const ComplexMatrix inner = detail::extended_projector_sum(node.x, cfg.band, grid_z) / abs_f_sq;
    total += (node.weight * abs_f_sq) * inner;
  }
  return max_entry(total - ComplexMatrix::Identity(cfg.band, cfg.band));
}

/// Operator reconstruction from its characteristic function:
///   A = int |f(t)|^2 d^2z/pi Tr[A U^dagger(z,t)] U(z,t)
/// (t = 0 is the plain displacement). Operator elements come from the
/// matrix-element closed forms on the band; the result is zero outside it.
inline ComplexMatrix glauber_reconstruct(const ComplexMatrix& a, const TruncationConfig& cfg,
                                         const PolarQuadrature& grid, double t = 0.0,
                                         double f_floor = kDefaultFFloor) {
  const int band = cfg.band;
  if (a.rows() != cfg.dim || a.cols() != cfg.dim)
    throw PreconditionError(detail::concat("glauber_reconstruct: operator is ", a.rows(), "x",
                                           a.cols(), ", expected ", cfg.dim, "x", cfg.dim));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if ((i >= band || j >= band) && a(i, j) != Complex{})
        throw PreconditionError(detail::concat("glauber_reconstruct: operator has support outside band ",
                                               band, " at (", i, ", ", j, ")"));
  if (grid.radial_count() < 2 * band + 2 || grid.angular_count() < 4 * band + 2)
    throw PreconditionError(detail::concat("glauber_reconstruct: need n_rad >= ", 2 * band + 2,
                                           " and M >= ", 4 * band + 2, " for band ", band));
  detail::require_measure(t, f_floor);

  const Complex f = f_of_t(t);
  const ComplexMatrix block = a.topLeftCorner(band, band);
  ComplexMatrix sum = ComplexMatrix::Zero(band, band);
  ComplexMatrix u(band, band);
  for (const auto& node : grid.nodes()) {
    const ExtendedParam p{node.z / f, t};
    for (int j = 0; j < band; ++j)
      for (int i = 0; i < band; ++i) u(i, j) = extended_matrix_element(i, j, p);
    // Tr[A U^dagger] = Sum_jk A_jk conj(U_jk).
    const Complex characteristic = (block.array() * u.array().conjugate()).sum();
    sum.noalias() += (node.weight * std::exp(std::norm(node.z)) * characteristic) * u;
  }
  ComplexMatrix out = ComplexMatrix::Zero(cfg.dim, cfg.dim);
  out.topLeftCorner(band, band) = sum;
  return out;
}

struct TraceProbe {
  Complex probe;
  Complex target;  // pairing of pi delta^2(z) with the same test function
};

namespace detail {

inline void require_probe_args(double sigma, double t) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw PreconditionError(concat("trace probe: sigma must be positive, got ", sigma));
  if (!std::isfinite(t) || near_multiple_of_two_pi(t))
    throw DomainError(concat("trace probe: t = ", t, " lies in 2 pi Z"));
}

}  // namespace detail

/// int Tr U(z,t) e^{-|z|^2/sigma^2} d^2z/pi = sigma^2 t / ((t + i sigma^2)(1 - e^{it})),
/// paired against the t = 0 trace pi delta^2(z), whose pairing is 1.
inline TraceProbe trace_limit_probe(double sigma, double t) {
  detail::require_probe_args(sigma, t);
  const double s2 = sigma * sigma;
  const Complex probe = s2 * t / (Complex{t, s2} * (1.0 - std::polar(1.0, t)));
  return {probe, Complex{1.0, 0.0}};
}

/// Same pairing by direct quadrature of the oscillatory radial integral
/// int_0^inf e^{-u/sigma^2} e^{-iu/t} du, composite Gauss-Legendre with panels
/// shorter than the oscillation period.
inline Complex trace_probe_numeric(double sigma, double t, int nodes_per_panel = 16) {
  detail::require_probe_args(sigma, t);
  const double s2 = sigma * sigma;
  const double upper = 40.0 * s2;
  const double panel = std::min(0.25 * std::abs(t), 0.25 * s2);
  const auto panels = static_cast<int>(std::ceil(upper / panel));
  const auto rule = gauss_legendre(nodes_per_panel);
  Complex sum{};
  for (int p = 0; p < panels; ++p) {
    const double lo = p * (upper / panels);
    const double half = 0.5 * (upper / panels);
    for (const auto& q : rule) {
      const double u = lo + half * (q.x + 1.0);
      sum += half * q.weight * std::exp(-u / s2) * std::polar(1.0, -u / t);
    }
  }
  return sum / (1.0 - std::polar(1.0, t));
}

}  // namespace coherent
