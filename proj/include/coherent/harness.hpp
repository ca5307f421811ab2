#pragma once

// Verification suites over the whole library, the JSON report they produce,
// and the CSV emitters behind the `table` and `probe` CLI subcommands.

#include "coherent/coherent_ops.hpp"
#include "coherent/extended_ops.hpp"
#include "coherent/matrix_core.hpp"
#include "coherent/oscillator_algebra.hpp"
#include "coherent/phase_space.hpp"
#include "coherent/scalar_kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace coherent {

inline constexpr int kReportSchemaVersion = 1;

/// Usage/config mistakes; the CLI maps these to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  int dim = 128;
  int band = 32;
  std::map<std::string, double> tol_overrides;
  int samples = 50;
  std::uint64_t seed = 1729;
  double z_radius = 2.0;
  double t_min = -6.0;
  double t_max = 6.0;
  std::vector<std::string> suites;  // empty: all
  bool timing = false;              // record wall time (makes reports run-dependent)
};

struct CheckResult {
  std::string name;
  std::string paper_ref;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::optional<double> seconds;
};

struct VerificationReport {
  SuiteConfig config;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }

  const CheckResult* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct CheckSpec {
  std::string_view name;
  std::string_view reference;
  double tol;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra",    "coherent", "extended", "glauber",
                                              "quadrature", "squeeze",  "trace"};
  return names;
}

/// Every check the suites can emit, its identity under test and default tolerance.
/// A tolerance of 0 marks exact checks.
inline const std::vector<CheckSpec>& check_catalog() {
  static const std::vector<CheckSpec> catalog{
      {"algebra.ladder_action", "a|n> = sqrt(n)|n-1>, a+ = a^dagger, N = diag(n)", 0.0},
      {"algebra.number_operator", "N = a+ a entrywise", 1e-13},
      {"algebra.number_commutators", "[N,a+] = a+, [N,a] = -a", 1e-12},
      {"algebra.canonical_commutator_interior", "[a,a+] = 1 off the truncation edge", 1e-12},
      {"algebra.canonical_commutator_edge", "([a,a+] - 1)_{D-1,D-1} = -D", 1e-12},
      {"algebra.completeness", "sum_n |n><n| = 1, <m|n> = delta_mn", 0.0},
      {"algebra.su11_commutator", "[K3,K+] = K+", 1e-12},
      {"coherent.disentangle_normal", "U(z) = e^{-|z|^2/2} e^{z a+} e^{-z* a}", 1e-9},
      {"coherent.disentangle_antinormal", "U(z) = e^{|z|^2/2} e^{-z* a} e^{z a+}", 1e-9},
      {"coherent.commutation", "U(z)U(w) = e^{z w* - z* w} U(w)U(z)", 1e-9},
      {"coherent.matrix_elements", "<n|U(z)|m> via associated Laguerre L_m^(n-m)(|z|^2)", 1e-9},
      {"coherent.eigenvector", "a|z> = z|z>", 1e-8},
      {"coherent.unitarity", "U(z)^dagger U(z) = 1", 1e-11 * 128},
      {"extended.disentangle_normal", "U(z,t) = e^{g|z|^2} e^{f z a+} e^{itN} e^{-f z* a}", 1e-9},
      {"extended.disentangle_antinormal", "U(z,t) = e^{-g*|z|^2} e^{-f* z* a} e^{itN} e^{f* z a+}",
       1e-9},
      {"extended.matrix_elements", "<n|U(z,t)|m> = e^{-|w|^2/2 - g*|z|^2 + itm} <n|U(w)|m>, w = f z",
       1e-9},
      {"extended.commutation",
       "U(z,t)U(w,s) = e^{f*(t)f*(s) z w* - f(t)f(s) z* w} U(w e^{it},s) U(z e^{-is},t)", 1e-9},
      {"extended.small_t_limit", "U(z,t) -> U(z) as t -> 0", 1e-5},
      {"extended.full_period", "U(z,2 pi) = e^{-i|z|^2/(2 pi)} 1 (shifted number operator form)", 1e-8},
      {"extended.conjugated_decomposition",
       "U(z,t) = e^{-i|z|^2/t} e^{(i/t)(z a+ + z* a)} e^{itN} e^{-(i/t)(z a+ + z* a)}", 1e-6},
      {"extended.unitarity", "U(z,t)^dagger U(z,t) = 1", 1e-11 * 128},
      {"glauber.vacuum_t0", "A = int d^2z/pi Tr[A U(z)^dagger] U(z), A = |0><0|", 1e-8},
      {"glauber.offdiag_t0", "A = int d^2z/pi Tr[A U(z)^dagger] U(z), A = |1><2| + |2><1|", 1e-6},
      {"glauber.offdiag_t1",
       "A = int |f(t)|^2 d^2z/pi Tr[A U(z,t)^dagger] U(z,t), t = 1, A = |1><2| + |2><1|", 1e-6},
      {"glauber.linearity", "reconstruction is linear in A", 1e-10},
      {"quadrature.radial_normalization", "int e^{-|z|^2} d^2z/pi = 1", 1e-12},
      {"quadrature.coherent_resolution", "int d^2z/pi |z><z| = 1", 1e-10},
      {"quadrature.extended_resolution", "int |f(t)|^2 d^2z/pi |z,t><z,t| = 1, t = 1.7", 1e-9},
      {"quadrature.measure_substitution", "|f(t)|^2 d^2z = d^2w with w = f(t) z, t = 1", 1e-8},
      {"quadrature.t_integrated_resolution",
       "int |f(t)|^2 e^{-|t|}/2 dt int d^2z/pi |z,t><z,t| = 1 (minus excluded mass)", 1e-6},
      {"squeeze.unitarity", "V(z,t) = exp(z K+ - z* K- + it K3) unitary", 1e-11 * 128},
      {"squeeze.vacuum_phases", "V(0,s) = diag(e^{is(n/2+1/4)})", 1e-12},
      {"squeeze.parity", "V(z,t) preserves Fock-state parity", 1e-12},
      {"squeeze.product_unitarity", "U(z,t) V(w,s) unitary", 1e-10},
      {"trace.abel_closed_form", "Tr U(z,t) = e^{-i|z|^2/t} / (1 - e^{it}) as Abel sum", 1e-6},
      {"trace.probe_value", "|probe(sigma=1, t=0.0625) - 1| = 0.0312", 1e-4},
      {"trace.probe_monotone", "|probe(t) - 1| strictly decreasing along t = 1/2 ... 1/16", 0.0},
      {"trace.probe_numeric", "closed-form Gaussian pairing of Tr U(z,t) vs oscillatory quadrature",
       1e-4},
  };
  return catalog;
}

inline const CheckSpec& check_spec(std::string_view name) {
  for (const auto& spec : check_catalog())
    if (spec.name == name) return spec;
  throw std::logic_error(detail::concat("no such check: ", name));
}

/// Seeded parameter draws shared by the property suites.
struct ParamSample {
  Complex z;
  Complex w;
  double t = 0.0;
  double s = 0.0;
};

namespace detail {

// [0, 1) from the top 53 bits; std::mt19937_64 output is fully specified, so
// samples (and reports) are identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Complex disk_uniform(std::mt19937_64& rng, double radius) {
  const double r = radius * std::sqrt(unit_uniform(rng));
  const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
  return std::polar(r, theta);
}

}  // namespace detail

inline std::vector<ParamSample> draw_samples(int count, std::uint64_t seed, double z_radius,
                                             double t_min, double t_max) {
  std::mt19937_64 rng(seed);
  std::vector<ParamSample> out(count);
  for (auto& p : out) {
    p.z = detail::disk_uniform(rng, z_radius);
    p.w = detail::disk_uniform(rng, z_radius);
    p.t = t_min + (t_max - t_min) * detail::unit_uniform(rng);
    p.s = t_min + (t_max - t_min) * detail::unit_uniform(rng);
  }
  return out;
}

/// A tolerance override key applies to the check of that name and to every
/// variant "<key>_..." of it (e.g. "extended.disentangle" covers both forms).
inline bool override_applies(std::string_view key, std::string_view check) {
  if (check == key) return true;
  return check.size() > key.size() && check.substr(0, key.size()) == key && check[key.size()] == '_';
}

inline std::optional<double> override_for(const SuiteConfig& cfg, std::string_view check) {
  std::optional<double> tol;
  for (const auto& [key, value] : cfg.tol_overrides) {
    if (key == check) return value;
    if (override_applies(key, check)) tol = value;
  }
  return tol;
}

inline void validate(const SuiteConfig& cfg) {
  if (cfg.dim < 2) throw UsageError(detail::concat("dim must be >= 2, got ", cfg.dim));
  if (cfg.band < 1 || 2 * cfg.band > cfg.dim)
    throw UsageError(detail::concat("band must lie in [1, dim/2], got ", cfg.band));
  if (cfg.samples < 1) throw UsageError(detail::concat("samples must be positive, got ", cfg.samples));
  if (!(cfg.z_radius > 0.0)) throw UsageError("z-radius must be positive");
  if (!(cfg.t_max >= cfg.t_min)) throw UsageError("t-range is empty");
  for (const auto& name : cfg.suites) {
    const auto& all = suite_names();
    if (std::find(all.begin(), all.end(), name) == all.end()) {
      std::string valid;
      for (const auto& s : all) valid += (valid.empty() ? "" : ", ") + s;
      throw UsageError(detail::concat("unknown suite '", name, "'; valid suites: ", valid));
    }
  }
  for (const auto& [name, tol] : cfg.tol_overrides) {
    const auto& cat = check_catalog();
    if (std::none_of(cat.begin(), cat.end(),
                     [&](const CheckSpec& c) { return override_applies(name, c.name); }))
      throw UsageError(detail::concat("unknown check '", name, "' in tolerance override"));
    if (!(tol >= 0.0)) throw UsageError(detail::concat("tolerance for ", name, " must be >= 0"));
  }
}

namespace detail {

class Recorder {
 public:
  Recorder(const SuiteConfig& cfg, std::vector<CheckResult>& out) : cfg_(cfg), out_(out) {}

  void record(std::string_view name, const std::function<double()>& residual,
              std::optional<double> default_tol = std::nullopt) {
    const CheckSpec& spec = check_spec(name);
    CheckResult r;
    r.name = std::string(name);
    r.paper_ref = std::string(spec.reference);
    r.tol = default_tol.value_or(spec.tol);
    if (const auto tol = override_for(cfg_, r.name)) r.tol = *tol;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.residual = residual();
    } catch (const std::exception&) {
      r.residual = std::numeric_limits<double>::infinity();
    }
    const auto stop = std::chrono::steady_clock::now();
    r.pass = r.residual <= r.tol;  // NaN fails
    if (cfg_.timing) r.seconds = std::chrono::duration<double>(stop - start).count();
    out_.push_back(std::move(r));
  }

  const SuiteConfig& config() const { return cfg_; }

 private:
  const SuiteConfig& cfg_;
  std::vector<CheckResult>& out_;
};

inline TruncationConfig truncation(const SuiteConfig& cfg) {
  return TruncationConfig{cfg.dim, cfg.band, 1e-9};
}

inline double sampled_max(const std::vector<ParamSample>& samples,
                          const std::function<double(const ParamSample&)>& fn) {
  double worst = 0.0;
  for (const auto& p : samples) worst = std::max(worst, fn(p));
  return worst;
}

inline void run_algebra(Recorder& rec) {
  const SuiteConfig& cfg = rec.config();
  const TruncationConfig tc = truncation(cfg);
  const int d = cfg.dim;
  const LadderSet l = build_ladder(tc);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  rec.record("algebra.ladder_action", [&] {
    double r = max_entry(l.a_dag - l.a.adjoint());
    for (int n = 0; n < d; ++n) {
      ComplexVector expected = ComplexVector::Zero(d);
      if (n > 0) expected[n - 1] = std::sqrt(static_cast<double>(n));
      r = std::max(r, (l.a * FockVector(d, n).amplitudes() - expected).cwiseAbs().maxCoeff());
      r = std::max(r, std::abs(l.n_op(n, n) - static_cast<double>(n)));
    }
    return r;
  });
  rec.record("algebra.number_operator", [&] { return max_entry(l.n_op - l.a_dag * l.a); });
  rec.record("algebra.number_commutators", [&] {
    const ComplexMatrix c1 = commutator(l.n_op, l.a_dag) - l.a_dag;
    const ComplexMatrix c2 = commutator(l.n_op, l.a) + l.a;
    return std::max(max_entry(c1), max_entry(c2));
  });
  const ComplexMatrix canonical = commutator(l.a, l.a_dag) - id;
  rec.record("algebra.canonical_commutator_interior",
             [&] { return band_residual(canonical, ComplexMatrix::Zero(d, d), d - 1); });
  rec.record("algebra.canonical_commutator_edge",
             [&] { return std::abs(canonical(d - 1, d - 1) + static_cast<double>(d)); });
  rec.record("algebra.completeness", [&] {
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    double gram = 0.0;
    for (int n = 0; n < d; ++n) {
      const ComplexVector v = number_state(tc, n).amplitudes();
      sum += v * v.adjoint();
      for (int m = 0; m < d; ++m) {
        const Complex ip = number_state(tc, m).amplitudes().dot(v);
        gram = std::max(gram, std::abs(ip - (m == n ? 1.0 : 0.0)));
      }
    }
    return std::max(gram, max_entry(sum - id));
  });
  if (d >= 3) {
    rec.record("algebra.su11_commutator", [&] {
      const Su11Set su = build_su11(tc);
      return band_residual(commutator(su.k3, su.k_plus), su.k_plus, d - 2);
    });
  }
}

inline void run_coherent(Recorder& rec, const std::vector<ParamSample>& samples) {
  const SuiteConfig& cfg = rec.config();
  const TruncationConfig tc = truncation(cfg);
  const int band = cfg.band;
  const int elements = std::min(21, band);

  struct Cached {
    ComplexMatrix uz;
  };
  std::vector<Cached> exact;
  exact.reserve(samples.size());
  for (const auto& p : samples) exact.push_back({displacement_exact({p.z}, tc)});

  auto index_of = [&](const ParamSample& p) { return static_cast<std::size_t>(&p - samples.data()); };

  rec.record("coherent.disentangle_normal", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      return band_residual(exact[index_of(p)].uz,
                           displacement_disentangled({p.z}, tc, DisentangleForm::Normal), band);
    });
  });
  rec.record("coherent.disentangle_antinormal", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      return band_residual(exact[index_of(p)].uz,
                           displacement_disentangled({p.z}, tc, DisentangleForm::Antinormal), band);
    });
  });
  rec.record("coherent.commutation", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      const ComplexMatrix& uz = exact[index_of(p)].uz;
      const ComplexMatrix uw = displacement_exact({p.w}, tc);
      return band_residual(uz * uw, commutation_phase({p.z}, {p.w}) * (uw * uz), band);
    });
  });
  rec.record("coherent.matrix_elements", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      const ComplexMatrix& uz = exact[index_of(p)].uz;
      double r = 0.0;
      for (int n = 0; n < elements; ++n)
        for (int m = 0; m < elements; ++m)
          r = std::max(r, std::abs(coherent_matrix_element(n, m, {p.z}) - uz(n, m)));
      return r;
    });
  });
  rec.record("coherent.eigenvector", [&] {
    const LadderSet l = build_ladder(tc);
    return sampled_max(samples, [&](const ParamSample& p) {
      const ComplexVector v = exact[index_of(p)].uz.col(0);
      return (l.a * v - p.z * v).norm();
    });
  });
  rec.record(
      "coherent.unitarity",
      [&] {
        return sampled_max(samples,
                           [&](const ParamSample& p) { return unitarity_defect(exact[index_of(p)].uz); });
      },
      1e-11 * cfg.dim);
}

inline void run_extended(Recorder& rec, const std::vector<ParamSample>& samples) {
  const SuiteConfig& cfg = rec.config();
  const TruncationConfig tc = truncation(cfg);
  const int band = cfg.band;
  const int elements = std::min(21, band);
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<ComplexMatrix> exact;
  exact.reserve(samples.size());
  for (const auto& p : samples) exact.push_back(extended_exact({p.z, p.t}, tc));
  auto index_of = [&](const ParamSample& p) { return static_cast<std::size_t>(&p - samples.data()); };

  rec.record("extended.disentangle_normal", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      return band_residual(exact[index_of(p)],
                           extended_disentangled({p.z, p.t}, tc, DisentangleForm::Normal), band);
    });
  });
  rec.record("extended.disentangle_antinormal", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      return band_residual(exact[index_of(p)],
                           extended_disentangled({p.z, p.t}, tc, DisentangleForm::Antinormal), band);
    });
  });
  rec.record("extended.matrix_elements", [&] {
    auto element_residual = [&](const ExtendedParam& p, const ComplexMatrix& oracle) {
      double r = 0.0;
      for (int n = 0; n < elements; ++n)
        for (int m = 0; m < elements; ++m)
          r = std::max(r, std::abs(extended_matrix_element(n, m, p) - oracle(n, m)));
      return r;
    };
    double r = sampled_max(samples, [&](const ParamSample& p) {
      return element_residual({p.z, p.t}, exact[index_of(p)]);
    });
    // Near the zeros of f(t), where only the rewritten prefactor stays finite.
    const double near_zero_offsets[] = {-7.5e-5, 3e-5, 9.9e-5};
    const int extra = std::min<int>(static_cast<int>(samples.size()), 3);
    for (int i = 0; i < extra; ++i) {
      const ExtendedParam p{samples[i].z, (i == 1 ? -two_pi : two_pi) + near_zero_offsets[i]};
      r = std::max(r, element_residual(p, extended_exact(p, tc)));
    }
    return r;
  });
  rec.record("extended.commutation", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      return extended_commutation_residual({p.z, p.t}, {p.w, p.s}, tc);
    });
  });
  rec.record("extended.small_t_limit", [&] {
    return sampled_max(samples, [&](const ParamSample& p) {
      return band_residual(extended_exact({p.z, 1e-6}, tc), displacement_exact({p.z}, tc), band);
    });
  });
  rec.record("extended.full_period", [&] {
    const int count = std::min<int>(static_cast<int>(samples.size()), 5);
    double r = 0.0;
    for (int i = 0; i < count; ++i) {
      const int k = i % 2 == 0 ? 1 : -1;
      const Complex z = samples[i].z;
      const ComplexMatrix u = extended_exact({z, two_pi * k}, tc);
      const ComplexMatrix expected =
          shift_form_full_period(z, k) * ComplexMatrix::Identity(cfg.dim, cfg.dim);
      r = std::max(r, band_residual(u, expected, band));
    }
    return r;
  });
  rec.record("extended.conjugated_decomposition", [&] {
    // |z| <= 1, t in [0.5, 3], D = 256, band 16: the conjugating displacement is |z|/t <= 2.
    const TruncationConfig wide{256, 16, 1e-6};
    std::mt19937_64 rng(cfg.seed ^ 0x3c6ef372fe94f82bULL);
    std::vector<ExtendedParam> params{{Complex{0.5, 0.0}, 1.0}, {Complex{1.0, 0.0}, 0.5},
                                      {Complex{0.0, 1.0}, 3.0}};
    for (int i = 0; i < 5; ++i) {
      const Complex z = disk_uniform(rng, 1.0);
      params.push_back({z, 0.5 + 2.5 * unit_uniform(rng)});
    }
    double r = 0.0;
    for (const auto& p : params)
      r = std::max(r, band_residual(conjugated_decomposition(p, wide), extended_exact(p, wide), 16));
    return r;
  });
  rec.record(
      "extended.unitarity",
      [&] {
        return sampled_max(samples,
                           [&](const ParamSample& p) { return unitarity_defect(exact[index_of(p)]); });
      },
      1e-11 * cfg.dim);
}

inline ComplexMatrix offdiag_operator(int dim) {
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  a(1, 2) = 1.0;
  a(2, 1) = 1.0;
  return a;
}

inline void run_glauber(Recorder& rec) {
  const SuiteConfig& cfg = rec.config();
  const int dim = std::max(cfg.dim, 16);
  const TruncationConfig tc{dim, 8, 1e-6};
  const PolarQuadrature grid = build_polar_grid(2 * tc.band + 2, 4 * tc.band + 2);
  const ComplexMatrix offdiag = offdiag_operator(dim);

  rec.record("glauber.vacuum_t0", [&] {
    ComplexMatrix vac = ComplexMatrix::Zero(dim, dim);
    vac(0, 0) = 1.0;
    return (glauber_reconstruct(vac, tc, grid, 0.0) - vac).norm();
  });
  rec.record("glauber.offdiag_t0",
             [&] { return (glauber_reconstruct(offdiag, tc, grid, 0.0) - offdiag).norm(); });
  rec.record("glauber.offdiag_t1",
             [&] { return (glauber_reconstruct(offdiag, tc, grid, 1.0) - offdiag).norm(); });
  rec.record("glauber.linearity", [&] {
    ComplexMatrix b = ComplexMatrix::Zero(dim, dim);
    b(0, 3) = Complex{0.5, -1.0};
    b(5, 5) = 2.0;
    const Complex alpha{0.7, 0.2};
    const Complex beta{-1.1, 0.4};
    const ComplexMatrix combined = glauber_reconstruct(alpha * offdiag + beta * b, tc, grid, 1.0);
    const ComplexMatrix separate = alpha * glauber_reconstruct(offdiag, tc, grid, 1.0) +
                                   beta * glauber_reconstruct(b, tc, grid, 1.0);
    return max_entry(combined - separate);
  });
}

inline void run_quadrature(Recorder& rec) {
  const SuiteConfig& cfg = rec.config();
  const int dim = std::max(cfg.dim, 32);
  const TruncationConfig tc16{dim, 16, 1e-10};
  const PolarQuadrature grid = build_polar_grid(20, 40);

  rec.record("quadrature.radial_normalization", [&] {
    double sum = 0.0;
    for (const auto& n : grid.radial_nodes()) sum += n.weight;
    return std::abs(sum - 1.0);
  });
  rec.record("quadrature.coherent_resolution", [&] { return resolution_residual_coherent(tc16, grid); });
  rec.record("quadrature.extended_resolution",
             [&] { return resolution_residual_extended(1.7, tc16, grid); });
  rec.record("quadrature.measure_substitution", [&] {
    const ComplexMatrix via_w = extended_resolution_matrix(1.0, tc16, grid);
    const ComplexMatrix via_z = extended_resolution_matrix_direct(1.0, tc16, 160, 9.0, 40);
    return max_entry(via_w - via_z);
  });
  const LineQuadratureT line = build_line_quadrature_t();
  const TruncationConfig tc8{dim, 8, 1e-6};
  rec.record(
      "quadrature.t_integrated_resolution",
      [&] { return resolution_residual_t_integrated(tc8, build_polar_grid(9, 17), line); },
      line.defect_bound() + 1e-6);
}

inline void run_squeeze(Recorder& rec, const std::vector<ParamSample>& samples) {
  const SuiteConfig& cfg = rec.config();
  const TruncationConfig tc = truncation(cfg);
  const int dim = cfg.dim;
  const int count = std::min<int>(static_cast<int>(samples.size()), 10);
  // V is sampled inside |z| < 0.9, away from the advisory |z| >= 1 region.
  const double scale = 0.9 / cfg.z_radius;

  rec.record(
      "squeeze.unitarity",
      [&] {
        double r = 0.0;
        for (int i = 0; i < count; ++i)
          r = std::max(r, unitarity_defect(squeeze_extended({samples[i].w * scale, samples[i].s}, tc)));
        return r;
      },
      1e-11 * dim);
  rec.record("squeeze.vacuum_phases", [&] {
    double r = 0.0;
    for (double s : {-2.3, 0.4, 1.0, 5.5}) {
      const ComplexMatrix v = squeeze_extended({Complex{}, s}, tc);
      ComplexMatrix expected = ComplexMatrix::Zero(dim, dim);
      for (int n = 0; n < dim; ++n) expected(n, n) = std::polar(1.0, s * (0.5 * n + 0.25));
      r = std::max(r, max_entry(v - expected));
    }
    return r;
  });
  rec.record("squeeze.parity", [&] {
    double r = 0.0;
    for (int i = 0; i < std::min(count, 3); ++i) {
      const ComplexMatrix v = squeeze_extended({samples[i].w * scale, samples[i].s}, tc);
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          if ((j + k) % 2 == 1) r = std::max(r, std::abs(v(j, k)));
    }
    return r;
  });
  rec.record("squeeze.product_unitarity", [&] {
    double r = unitarity_defect(product_uv({Complex{1.0, 0.0}, 0.5}, {Complex{0.3, 0.0}, 1.0}, tc));
    for (int i = 0; i < std::min(count, 3); ++i) {
      const auto& p = samples[i];
      r = std::max(r, unitarity_defect(product_uv({p.z, p.t}, {p.w * scale, p.s}, tc)));
    }
    return r;
  });
}

inline void run_trace(Recorder& rec) {
  rec.record("trace.abel_closed_form", [&] {
    double r = 0.0;
    for (double t : {1.0, 2.5, std::numbers::pi}) {
      const Complex abel = abel_trace(t);
      for (double z : {0.0, 1.0}) {
        const ExtendedParam p{Complex{z, 0.0}, t};
        // e^{-i|z|^2/t} Tr e^{itN}, the trace summed under Abel regularization.
        const Complex summed = std::polar(1.0, -z * z / t) * abel;
        r = std::max(r, std::abs(summed - extended_trace_closed(p)));
      }
    }
    return r;
  });
  rec.record("trace.probe_value", [&] {
    const TraceProbe p = trace_limit_probe(1.0, 0.0625);
    return std::abs(std::abs(p.probe - p.target) - 0.0312);
  });
  rec.record("trace.probe_monotone", [&] {
    double previous = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (double t : {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625}) {
      const TraceProbe p = trace_limit_probe(1.0, t);
      const double deviation = std::abs(p.probe - p.target);
      if (!(deviation < previous)) ++violations;
      previous = deviation;
    }
    return static_cast<double>(violations);
  });
  rec.record("trace.probe_numeric", [&] {
    double r = 0.0;
    for (double t : {0.25, 0.5, 1.0, 2.5})
      r = std::max(r, std::abs(trace_probe_numeric(1.0, t) - trace_limit_probe(1.0, t).probe));
    return r;
  });
}

}  // namespace detail

/// Runs the selected suites in catalog order (independent of selection
/// order). Deterministic for a fixed config unless timing is enabled.
inline VerificationReport run_suites(const SuiteConfig& cfg) {
  validate(cfg);
  VerificationReport report;
  report.config = cfg;
  const auto selected = [&](const std::string& name) {
    return cfg.suites.empty() || std::find(cfg.suites.begin(), cfg.suites.end(), name) != cfg.suites.end();
  };
  const auto samples = draw_samples(cfg.samples, cfg.seed, cfg.z_radius, cfg.t_min, cfg.t_max);
  detail::Recorder rec(report.config, report.checks);
  for (const auto& name : suite_names()) {
    if (!selected(name)) continue;
    if (name == "algebra") detail::run_algebra(rec);
    if (name == "coherent") detail::run_coherent(rec, samples);
    if (name == "extended") detail::run_extended(rec, samples);
    if (name == "glauber") detail::run_glauber(rec);
    if (name == "quadrature") detail::run_quadrature(rec);
    if (name == "squeeze") detail::run_squeeze(rec, samples);
    if (name == "trace") detail::run_trace(rec);
  }
  return report;
}

inline nlohmann::ordered_json to_json(const VerificationReport& report) {
  using nlohmann::ordered_json;
  const SuiteConfig& c = report.config;
  ordered_json config{{"dim", c.dim},         {"band", c.band},   {"samples", c.samples},
                      {"seed", c.seed},       {"z_radius", c.z_radius},
                      {"t_min", c.t_min},     {"t_max", c.t_max}, {"timing", c.timing}};
  std::vector<std::string> suites = c.suites.empty() ? suite_names() : c.suites;
  std::sort(suites.begin(), suites.end());
  suites.erase(std::unique(suites.begin(), suites.end()), suites.end());
  config["suites"] = suites;
  ordered_json overrides = ordered_json::object();
  for (const auto& [name, tol] : c.tol_overrides) overrides[name] = tol;
  config["tol_overrides"] = overrides;

  ordered_json checks = ordered_json::array();
  for (const auto& r : report.checks) {
    ordered_json entry{{"name", r.name}, {"paper_ref", r.paper_ref}};
    // JSON has no infinity/NaN; failed evaluations are reported as null.
    entry["residual"] = std::isfinite(r.residual) ? ordered_json(r.residual) : ordered_json(nullptr);
    entry["tol"] = r.tol;
    entry["pass"] = r.pass;
    entry["seconds"] = r.seconds ? ordered_json(*r.seconds) : ordered_json(nullptr);
    checks.push_back(std::move(entry));
  }
  return ordered_json{{"schema_version", kReportSchemaVersion}, {"config", config}, {"checks", checks}};
}

inline std::string report_text(const VerificationReport& report) {
  return to_json(report).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV emitters

enum class TableKind { Coherent, Extended };

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

/// CSV of closed-form matrix elements against the truncated exact exponential:
/// columns n, m, re_closed, im_closed, re_oracle, im_oracle, abs_err.
inline void emit_matrix_table(TableKind kind, int n_max, int m_max, Complex z, double t,
                              const std::string& path, int dim = 128) {
  if (n_max < 0 || m_max < 0 || n_max > 64 || m_max > 64)
    throw UsageError(detail::concat("table indices must lie in [0, 64], got nmax = ", n_max,
                                    ", mmax = ", m_max));
  if (dim <= std::max(n_max, m_max))
    throw UsageError(detail::concat("dim ", dim, " too small for the requested indices"));
  const TruncationConfig tc{dim, 1, 1e-9};
  const ComplexMatrix oracle =
      kind == TableKind::Coherent ? displacement_exact({z}, tc) : extended_exact({z, t}, tc);
  auto out = detail::open_output(path);
  out << "n,m,re_closed,im_closed,re_oracle,im_oracle,abs_err\n";
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= m_max; ++m) {
      const Complex closed = kind == TableKind::Coherent ? coherent_matrix_element(n, m, {z})
                                                         : extended_matrix_element(n, m, {z, t});
      const Complex exact = oracle(n, m);
      out << n << ',' << m << ',' << format_double(closed.real()) << ','
          << format_double(closed.imag()) << ',' << format_double(exact.real()) << ','
          << format_double(exact.imag()) << ',' << format_double(std::abs(closed - exact)) << '\n';
    }
  }
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

/// CSV rows (t, re_probe, im_probe, abs_dev_from_1) of the Gaussian trace
/// probe. Entries in 2 pi Z are skipped with a '#' warning line.
inline int emit_probe_series(double sigma, const std::vector<double>& t_list, const std::string& path) {
  if (!(sigma > 0.0)) throw UsageError(detail::concat("sigma must be positive, got ", sigma));
  auto out = detail::open_output(path);
  out << "t,re_probe,im_probe,abs_dev_from_1\n";
  int skipped = 0;
  for (double t : t_list) {
    if (!std::isfinite(t) || near_multiple_of_two_pi(t)) {
      out << "# warning: skipped t=" << format_double(t) << " (in 2 pi Z, trace undefined)\n";
      ++skipped;
      continue;
    }
    const TraceProbe p = trace_limit_probe(sigma, t);
    out << format_double(t) << ',' << format_double(p.probe.real()) << ','
        << format_double(p.probe.imag()) << ',' << format_double(std::abs(p.probe - p.target)) << '\n';
  }
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
  return skipped;
}

}  // namespace coherent
