#include "core/chsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "core/bell.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/parallel.hpp"

namespace bellsim {

double analytic_correlation_cosine(const UnitVector& a, const UnitVector& b) {
  return -dot(a, b);
}

CorrelationSource::CorrelationSource(Kind kind, std::string label)
    : kind_(kind), label_(std::move(label)) {}

CorrelationSource CorrelationSource::linear() {
  CorrelationSource s(Kind::AnalyticLinear, "linear");
  s.fn_ = [](const UnitVector& a, const UnitVector& b) {
    return analytic_correlation_linear(a, b);
  };
  return s;
}

CorrelationSource CorrelationSource::cosine() {
  CorrelationSource s(Kind::AnalyticCosine, "cosine");
  s.fn_ = [](const UnitVector& a, const UnitVector& b) {
    return analytic_correlation_cosine(a, b);
  };
  return s;
}

CorrelationSource CorrelationSource::empirical(
    std::shared_ptr<const std::vector<UnitVector>> lambdas, double tie_epsilon,
    unsigned threads) {
  if (!lambdas || lambdas->empty())
    throw DomainError("CorrelationSource: empirical source needs a non-empty ensemble");
  CorrelationSource s(Kind::Empirical, "empirical");
  s.lambdas_ = std::move(lambdas);
  s.tie_epsilon_ = tie_epsilon;
  s.threads_ = threads;
  return s;
}

CorrelationSource CorrelationSource::custom(
    std::string label, std::function<double(const UnitVector&, const UnitVector&)> fn) {
  CorrelationSource s(Kind::Custom, std::move(label));
  s.fn_ = std::move(fn);
  return s;
}

double CorrelationSource::value(const UnitVector& a, const UnitVector& b) const {
  if (kind_ == Kind::Empirical)
    return empirical_correlation(*lambdas_, a, b, tie_epsilon_, threads_).value;
  return fn_(a, b);
}

double CorrelationSource::standard_error(const UnitVector& a, const UnitVector& b) const {
  if (kind_ == Kind::Empirical)
    return empirical_correlation(*lambdas_, a, b, tie_epsilon_, threads_).standard_error;
  return 0.0;
}

double chsh_value(const CorrelationSource& source, const DetectorSettings& s) {
  return source.value(s.a, s.b) + source.value(s.a, s.b_prime) +
         source.value(s.a_prime, s.b) - source.value(s.a_prime, s.b_prime);
}

ScanSpec ScanSpec::with_step(double step_deg) {
  if (!(step_deg > 0.0) || !std::isfinite(step_deg))
    throw DomainError("ScanSpec: step must be a positive angle");
  ScanSpec spec;
  for (double a = 0.0; a < 360.0; a += step_deg) spec.grid_deg.push_back(a);
  return spec;
}

namespace {

struct PairTables {
  std::size_t n = 0;  // grid size
  std::vector<double> e;    // n*n, E(u_i, u_j)
  std::vector<double> se2;  // n*n, squared standard error (all zero if exact)
  bool has_se = false;

  double E(std::size_t i, std::size_t j) const { return e[i * n + j]; }
  double SE2(std::size_t i, std::size_t j) const { return se2[i * n + j]; }
};

// Packed station outcomes: one bit per ensemble member and grid angle.
// E(u_i, u_j) = -(N - 2 * hamming(col_i, col_j)) / N reproduces the integer
// estimator sum exactly, turning the grid's pair table into XORs+popcounts.
PairTables empirical_pair_tables(const CorrelationSource& source,
                                 const std::vector<UnitVector>& stations,
                                 unsigned threads) {
  const std::vector<UnitVector>& lambdas = *source.ensemble();
  const std::size_t n = stations.size();
  const std::size_t count = lambdas.size();
  const std::size_t words = (count + 63) / 64;

  std::vector<std::uint64_t> columns(n * words, 0);
  parallel_chunks(n, threads, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      std::uint64_t* col = columns.data() + k * words;
      for (std::size_t j = 0; j < count; ++j) {
        if (observable_A(stations[k], lambdas[j], source.tie_epsilon()) > 0)
          col[j >> 6] |= std::uint64_t{1} << (j & 63);
      }
    }
  });

  PairTables t;
  t.n = n;
  t.has_se = true;
  t.e.assign(n * n, 0.0);
  t.se2.assign(n * n, 0.0);
  const double dn = static_cast<double>(count);

  parallel_chunks(n, threads, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t* ci = columns.data() + i * words;
      for (std::size_t j = i; j < n; ++j) {
        const std::uint64_t* cj = columns.data() + j * words;
        std::uint64_t mismatches = 0;
        for (std::size_t w = 0; w < words; ++w)
          mismatches += static_cast<std::uint64_t>(std::popcount(ci[w] ^ cj[w]));
        const long long sum =
            -(static_cast<long long>(count) - 2 * static_cast<long long>(mismatches));
        const double e = static_cast<double>(sum) / dn;
        const double se2 = std::max(0.0, 1.0 - e * e) / dn;
        t.e[i * n + j] = e;
        t.e[j * n + i] = e;
        t.se2[i * n + j] = se2;
        t.se2[j * n + i] = se2;
      }
    }
  });
  return t;
}

PairTables direct_pair_tables(const CorrelationSource& source,
                              const std::vector<UnitVector>& stations,
                              unsigned threads) {
  const std::size_t n = stations.size();
  PairTables t;
  t.n = n;
  t.e.assign(n * n, 0.0);
  t.se2.assign(n * n, 0.0);
  parallel_chunks(n, threads, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < n; ++j)
        t.e[i * n + j] = source.value(stations[i], stations[j]);
  });
  return t;
}

struct GridBest {
  double abs_value = -1.0;
  double value = 0.0;
  std::array<std::size_t, 3> idx{0, 0, 0};  // a', b, b'
  double bound_margin = -std::numeric_limits<double>::infinity();
};

// theta_a is pinned to grid index 0; iterate the free indices in ascending
// (a', b, b') order so the first strict maximum is the lexicographically
// smallest maximizing quadruple.
GridBest scan_grid(const PairTables& t, unsigned threads) {
  const std::size_t n = t.n;
  const unsigned workers = resolve_thread_count(threads);
  std::vector<GridBest> row_best(std::max<std::size_t>(1, workers));

  parallel_chunks(n, threads, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
    GridBest best;
    for (std::uint64_t ia = begin; ia < end; ++ia) {
      for (std::size_t ib = 0; ib < n; ++ib) {
        const double e_ab = t.E(0, ib);
        const double e_apb = t.E(ia, ib);
        for (std::size_t ibp = 0; ibp < n; ++ibp) {
          const double s = e_ab + t.E(0, ibp) + e_apb - t.E(ia, ibp);
          const double abs_s = std::abs(s);
          if (abs_s > best.abs_value) {
            best.abs_value = abs_s;
            best.value = s;
            best.idx = {static_cast<std::size_t>(ia), ib, ibp};
          }
          if (t.has_se) {
            const double rss = std::sqrt(t.SE2(0, ib) + t.SE2(0, ibp) +
                                         t.SE2(ia, ib) + t.SE2(ia, ibp));
            best.bound_margin = std::max(best.bound_margin, abs_s - 5.0 * rss);
          } else if (abs_s > best.bound_margin) {
            best.bound_margin = abs_s;
          }
        }
      }
    }
    row_best[w] = best;
  });

  // Chunks cover ascending index ranges; merging in chunk order with a
  // strict comparison keeps the lexicographic tie-break exact.
  GridBest best;
  for (const GridBest& b : row_best) {
    if (b.abs_value > best.abs_value) {
      best.abs_value = b.abs_value;
      best.value = b.value;
      best.idx = b.idx;
    }
    best.bound_margin = std::max(best.bound_margin, b.bound_margin);
  }
  return best;
}

double chsh_at_angles(const CorrelationSource& source, const std::array<double, 4>& deg) {
  const DetectorSettings s{coplanar_direction(deg[0]), coplanar_direction(deg[1]),
                           coplanar_direction(deg[2]), coplanar_direction(deg[3])};
  return chsh_value(source, s);
}

// Maximize |CHSH| along one angle coordinate with golden-section search.
// Returns (best value, best coordinate) without touching `deg`.
std::pair<double, double> golden_polish(const CorrelationSource& source,
                                        const std::array<double, 4>& deg,
                                        std::size_t coord, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498948482;
  auto eval = [&](double v) {
    std::array<double, 4> probe = deg;
    probe[coord] = v;
    return std::abs(chsh_at_angles(source, probe));
  };
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int it = 0; it < 90 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = eval(x1);
    }
  }
  return f1 >= f2 ? std::pair{f1, x1} : std::pair{f2, x2};
}

}  // namespace

ChshScanResult max_abs_chsh(const CorrelationSource& source, const ScanSpec& spec,
                            unsigned threads) {
  const std::vector<double>& grid = spec.grid_deg;
  if (grid.empty()) throw DomainError("max_abs_chsh: empty angle grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError("max_abs_chsh: non-finite grid angle");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw DomainError("max_abs_chsh: grid must be strictly ascending");
  }

  std::vector<UnitVector> stations;
  stations.reserve(grid.size());
  for (double a : grid) stations.push_back(coplanar_direction(a));

  const PairTables tables =
      source.kind() == CorrelationSource::Kind::Empirical
          ? empirical_pair_tables(source, stations, threads)
          : direct_pair_tables(source, stations, threads);
  const GridBest best = scan_grid(tables, threads);

  ChshScanResult result{.angles_deg = {grid[0], grid[best.idx[0]], grid[best.idx[1]],
                                       grid[best.idx[2]]},
                        .settings = {stations[0], stations[best.idx[0]],
                                     stations[best.idx[1]], stations[best.idx[2]]},
                        .value = best.value,
                        .max_abs = best.abs_value,
                        .grid_max_abs = best.abs_value,
                        .max_bound_margin = best.bound_margin};

  // Polish the free angles inside the winning cell. The empirical objective
  // is piecewise constant in angle, so refinement is only meaningful for the
  // smooth sources.
  if (spec.refine && source.kind() != CorrelationSource::Kind::Empirical &&
      grid.size() >= 2) {
    auto neighbor_bracket = [&](double center) {
      double gap = 0.0;
      for (std::size_t i = 1; i < grid.size(); ++i)
        gap = std::max(gap, grid[i] - grid[i - 1]);
      return std::pair<double, double>{center - gap, center + gap};
    };
    std::array<double, 4> deg = result.angles_deg;
    double current = result.max_abs;
    for (int sweep = 0; sweep < 64; ++sweep) {
      const double before = current;
      for (std::size_t coord = 1; coord < 4; ++coord) {
        const auto [lo, hi] = neighbor_bracket(deg[coord]);
        const auto [val, arg] = golden_polish(source, deg, coord, lo, hi);
        if (val > current) {
          current = val;
          deg[coord] = arg;
        }
      }
      if (current - before < 1e-13) break;
    }
    if (current > result.max_abs) {
      result.angles_deg = deg;
      result.settings = {coplanar_direction(deg[0]), coplanar_direction(deg[1]),
                         coplanar_direction(deg[2]), coplanar_direction(deg[3])};
      result.value = chsh_at_angles(source, deg);
      result.max_abs = std::abs(result.value);
    }
  }

  const DetectorSettings& s = result.settings;
  const std::array<std::pair<const UnitVector*, const UnitVector*>, 4> pairs{
      {{&s.a, &s.b}, {&s.a, &s.b_prime}, {&s.a_prime, &s.b}, {&s.a_prime, &s.b_prime}}};
  double rss2 = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    result.term_values[k] = source.value(*pairs[k].first, *pairs[k].second);
    result.term_standard_errors[k] =
        source.standard_error(*pairs[k].first, *pairs[k].second);
    rss2 += result.term_standard_errors[k] * result.term_standard_errors[k];
  }
  result.combined_standard_error = std::sqrt(rss2);
  return result;
}

}  // namespace bellsim
