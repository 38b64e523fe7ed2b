#pragma once

#include "nilsoliton/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nilsoliton {

struct FlowOptions {
  double tol = 1e-9;       ///< residual declaring a distinguished point
  int max_iter = 200000;
  double eta0 = 0.01;      ///< initial step
  double eta_growth = 1.5; ///< step growth after an accepted step
  double eta_max = 10.0;
  double backtrack = 0.5;
  int max_halvings = 40;
  double armijo = 1e-4;
  double rank_tol = 1e-7;  ///< relative smallest singular value of the component span
  int rank_check_every = 100;
  /// At a numerically distinguished point, the orbit map g -> V must keep
  /// its rank: the r0-th singular value over the largest (r0 fixed at the
  /// start) below orbit_tol means the limit has left the orbit.
  double orbit_tol = 1e-2;
  bool record_trace = false;
};

enum class FlowStatus { DistinguishedFound, Degenerated, MaxIterations };

std::string to_string(FlowStatus s);

struct FlowResult {
  FlowStatus status = FlowStatus::MaxIterations;
  StructureTensor final;
  double residual = 0.0;
  double r = 0.0;
  int iterations = 0;
  double min_rank_sigma = 0.0;  ///< smallest relative component singular value seen
  double orbit_sigma = 0.0;     ///< relative orbit-map singular value at the end (0 if not computed)
  std::string note;
  std::vector<double> objective_trace;  ///< |m|^2/|C|^4 per accepted iterate (record_trace)
  std::vector<double> residual_trace;
};

/// Normalized gradient flow of |m(C)|^2 / |C|^4 on the unit sphere with
/// Armijo backtracking. The outcome is evidence about the orbit, never a
/// proof: only certificates decide the Einstein question.
FlowResult flow_to_distinguished(const StructureTensor& c, const FlowOptions& opts = {});

/// Singular values of the differential of the GL(q) x GL(p) orbit map at C,
/// (X, Y) -> X C + C X^T + Y C, sorted decreasingly.
Vector orbit_map_singular_values(const StructureTensor& c);

/// Number of singular values above rel_tol times the largest.
int numerical_rank(const Vector& sigma, double rel_tol = 1e-9);

/// Standard-normal skew entries, from the given generator seed.
StructureTensor random_tensor(int p, int q, std::uint64_t seed);

/// Per-trial seed derived from the run seed (splitmix64).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

struct ScanTrial {
  std::uint64_t seed = 0;
  FlowStatus status = FlowStatus::MaxIterations;
  double residual = 0.0;
  int iterations = 0;
  double orbit_sigma = 0.0;
};

struct ScanSummary {
  int p = 0, q = 0, trials = 0;
  std::uint64_t seed = 0;
  double fraction_distinguished = 0.0;
  int distinguished = 0, degenerated = 0, max_iterations = 0;
  std::vector<double> bin_edges;  ///< log10(residual) edges
  std::vector<int> histogram;     ///< counts per bin; the first bin also takes residual 0
  std::vector<ScanTrial> results;

  std::string histogram_csv() const;
};

/// Draws `trials` random tensors of type (p, q) and flows each one.
/// Parallel over trials (threads capped by NILSOLITON_THREADS), deterministic.
ScanSummary scan_generic(int p, int q, int trials, std::uint64_t seed, const FlowOptions& opts = {},
                         std::optional<int> threads = std::nullopt);

/// Worker count: min(requested or hardware, NILSOLITON_THREADS), at least 1.
int worker_count(std::optional<int> requested = std::nullopt);

}  // namespace nilsoliton
