#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/vec.hpp"

namespace bellsim {

// Correlation predicted by the orientation-ensemble average: -a . b.
double analytic_correlation_cosine(const UnitVector& a, const UnitVector& b);

struct DetectorSettings {
  UnitVector a, a_prime, b, b_prime;
};

// A correlation E(a, b) that the CHSH string can be evaluated against:
// either of the two analytic predictors, the empirical estimator over a
// recorded ensemble, or an arbitrary tagged function (tests).
class CorrelationSource {
 public:
  enum class Kind { AnalyticLinear, AnalyticCosine, Empirical, Custom };

  static CorrelationSource linear();
  static CorrelationSource cosine();
  static CorrelationSource empirical(
      std::shared_ptr<const std::vector<UnitVector>> lambdas,
      double tie_epsilon = 0.0, unsigned threads = 1);
  static CorrelationSource custom(
      std::string label,
      std::function<double(const UnitVector&, const UnitVector&)> fn);

  double value(const UnitVector& a, const UnitVector& b) const;
  // Estimator standard error; exactly 0 for analytic and custom sources.
  double standard_error(const UnitVector& a, const UnitVector& b) const;

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const std::vector<UnitVector>* ensemble() const { return lambdas_.get(); }
  double tie_epsilon() const { return tie_epsilon_; }
  unsigned threads() const { return threads_; }

 private:
  CorrelationSource(Kind kind, std::string label);

  Kind kind_;
  std::string label_;
  std::function<double(const UnitVector&, const UnitVector&)> fn_;
  std::shared_ptr<const std::vector<UnitVector>> lambdas_;
  double tie_epsilon_ = 0.0;
  unsigned threads_ = 1;
};

// E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh_value(const CorrelationSource& source, const DetectorSettings& settings);

// Scan family: coplanar settings in the canonical z-x plane, each station
// angle drawn from `grid_deg`, with the first station pinned to grid_deg[0].
// For a full-circle uniform grid the pin loses nothing: analytic CHSH values
// depend only on pairwise angle differences, so every maximizer has a
// rotated twin with theta_a = grid[0], and that twin is the lexicographic
// minimum. The grid must be strictly ascending; an empty grid is a domain
// error.
struct ScanSpec {
  std::vector<double> grid_deg;
  bool refine = true;

  static ScanSpec with_step(double step_deg = 1.0);
};

struct ChshScanResult {
  std::array<double, 4> angles_deg{};  // theta_a, theta_a', theta_b, theta_b'
  DetectorSettings settings;
  double value = 0.0;    // signed CHSH at the reported settings
  double max_abs = 0.0;  // |value| after any refinement

  std::array<double, 4> term_values{};           // E at (a,b) (a,b') (a',b) (a',b')
  std::array<double, 4> term_standard_errors{};  // zeros for exact sources
  double combined_standard_error = 0.0;          // root-sum-square of the four

  double grid_max_abs = 0.0;  // best |CHSH| on the raw grid
  // Largest |CHSH| - 5 * combined-SE seen anywhere on the grid; equals
  // grid_max_abs for zero-SE sources. A locality-respecting source keeps
  // this at or below 2.
  double max_bound_margin = 0.0;
};

// Grid scan for the settings maximizing |chsh_value|, ties broken toward the
// lexicographically smallest angle quadruple, followed (for non-empirical
// sources) by golden-section coordinate polish inside the winning cell.
// Deterministic for a fixed grid, independent of thread count.
ChshScanResult max_abs_chsh(const CorrelationSource& source, const ScanSpec& spec,
                            unsigned threads = 0);

}  // namespace bellsim
