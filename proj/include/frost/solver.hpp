#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "frost/graph.hpp"
#include "frost/model.hpp"

namespace frost {

enum class NodeOrder { fixed, shuffled };

struct FrostConfig {
  int max_outer_iterations = 500;
  double rel_tol = 1e-6;   ///< stop on a relative error decrease below this
  double abs_tol = 1e-12;  ///< stop when the error itself falls below this
  std::uint64_t seed = 0;
  NodeOrder node_order = NodeOrder::fixed;
  /// Value assigned when a row subproblem has no nonnegative stationary
  /// point; < 0 selects sqrt(r/n).
  double default_weight = -1.0;
  /// Cooperative wall-clock budget; the solver stops between sweeps once
  /// exceeded and flags the result.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Coefficients of the row subproblem f(z) = a z^4 + b z^2 + c z.
struct QuarticCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double eval(double z) const { return ((a * z * z + b) * z + c) * z; }
};

struct QuarticMinimum {
  double z = 0.0;
  double value = 0.0;  ///< f(z), the row's objective contribution
  bool used_default = false;
};

/// theta = Z^T A Z over the graph edges; symmetric and nonnegative by
/// construction. Expects column-normalized z.
MixingMatrix update_theta(const Graph& g, const ScaledAssignment& z);

/// Subproblem coefficients for moving node i into community k, excluding
/// row i's own contribution. O(n) reference implementation; the solver keeps
/// the quadratic sums incrementally instead.
QuarticCoeffs quartic_coeffs(const Graph& g, const ScaledAssignment& z, const MixingMatrix& theta,
                             int i, int k);

/// Minimizes f over z >= 0 using the stationary points of the derivative
/// cubic (Cardano, trigonometric branch for three real roots, one Newton
/// polish per root). When no nonnegative stationary point exists, or f is
/// unbounded below on the ray, z gets `default_value` and used_default is
/// set.
QuarticMinimum minimize_quartic(const QuarticCoeffs& q, double default_value);

/// Sweep state for the row updates: per-community running totals
/// S(k) = sum_j (w(j) * theta(v(j),k))^2, maintained incrementally and
/// recomputed once per outer iteration to cap drift.
class RowOptimizer {
 public:
  RowOptimizer(const Graph& g, const ScaledAssignment& z, const MixingMatrix& theta);

  /// Rebuilds the totals from the current (z, theta).
  void recompute(const ScaledAssignment& z, const MixingMatrix& theta);

  QuarticCoeffs coeffs_excluding(const Graph& g, const ScaledAssignment& z,
                                 const MixingMatrix& theta, int i, int k) const;

  /// Removes row i's contribution; callers must add_row afterwards.
  void remove_row(const ScaledAssignment& z, const MixingMatrix& theta, int i);
  void add_row(const ScaledAssignment& z, const MixingMatrix& theta, int i);

  double total(int k) const { return totals_[k]; }

 private:
  std::vector<double> totals_;
};

struct RowUpdate {
  int community = 0;
  double weight = 0.0;
  double error_change = 0.0;  ///< new minus old row contribution, theta fixed
  bool used_default = false;
};

/// Reassigns node i to the community whose optimal weight yields the lowest
/// row objective (ties to the smallest index); mutates z and the optimizer
/// totals.
RowUpdate update_row(const Graph& g, ScaledAssignment& z, const MixingMatrix& theta,
                     RowOptimizer& opt, int i, double default_value);

struct FrostTracePoint {
  int iteration = 0;
  double frobenius_error = 0.0;
  int defaults_fired = 0;
};

struct FrostResult {
  ScaledAssignment z;
  MixingMatrix theta;
  std::vector<FrostTracePoint> trace;  ///< [0] is the initial error
  int iterations = 0;
  bool timed_out = false;

  double final_error() const { return trace.back().frobenius_error; }
};

/// Alternates row sweeps with column normalization and the closed-form theta
/// update until a stopping criterion fires.
FrostResult frost_solve(const Graph& g, ScaledAssignment z, MixingMatrix theta,
                        const FrostConfig& cfg = {});

/// Uniform random community per node, unit weights normalized, theta from
/// the closed form.
std::pair<ScaledAssignment, MixingMatrix> random_init(const Graph& g, int r, std::uint64_t seed);

/// CSV with columns iteration,frobenius_error,defaults_fired.
void write_trace_csv(const std::vector<FrostTracePoint>& trace, const std::filesystem::path& path);

}  // namespace frost
