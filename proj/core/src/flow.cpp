#include "nilsoliton/flow.hpp"

#include "nilsoliton/errors.hpp"
#include "nilsoliton/moment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

namespace nilsoliton {

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::DistinguishedFound: return "DistinguishedFound";
    case FlowStatus::Degenerated: return "Degenerated";
    case FlowStatus::MaxIterations: return "MaxIterations";
  }
  return "?";
}

Vector orbit_map_singular_values(const StructureTensor& c) {
  const int p = c.p(), q = c.q();
  const int cols = q * q + p * p;
  const int rows = p * so_dimension(q);
  Matrix a(rows, cols);
  int col = 0;
  const Matrix zq = Matrix::Zero(q, q), zp = Matrix::Zero(p, p);
  auto put = [&](const StructureTensor& img) {
    // Isometric coordinates of the image.
    int r = 0;
    for (int k = 0; k < p; ++k)
      for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j) a(r++, col) = std::sqrt(2.0) * img[k](i, j);
    ++col;
  };
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      Matrix x = zq;
      x(i, j) = 1.0;
      put(infinitesimal_act(x, zp, c));
    }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      Matrix y = zp;
      y(i, j) = 1.0;
      put(infinitesimal_act(zq, y, c));
    }
  return Eigen::BDCSVD<Matrix>(a).singularValues();
}

int numerical_rank(const Vector& sigma, double rel_tol) {
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > rel_tol * sigma(0)) ++r;
  return r;
}

namespace {

struct State {
  StructureTensor c;
  double f;         // |m|^2 / |C|^4 with |C| = 1
  double r;
  double residual;
  StructureTensor grad;  // m(C).C - rC
};

State evaluate(StructureTensor c) {
  const double cc = inner(c, c);
  const MomentImage m = moment(c);
  const StructureTensor w = moment_action(c, m);
  const double r = inner(w, c) / cc;
  StructureTensor g = axpy(w, -r, c);
  const double mn = m.norm();
  const double res = norm(g) / (std::sqrt(cc) * mn);
  return State{std::move(c), (mn * mn) / (cc * cc), r, res, std::move(g)};
}

void check_finite(const State& s, int iter) {
  if (!std::isfinite(s.f) || !std::isfinite(s.residual))
    throw NumericalError("flow: non-finite value at iteration " + std::to_string(iter));
}

}  // namespace

FlowResult flow_to_distinguished(const StructureTensor& c0, const FlowOptions& opts) {
  const double n0 = norm(c0);
  if (n0 == 0.0) throw ContractError("flow_to_distinguished: zero tensor");
  if (!(opts.tol > 0.0) || !(opts.rank_tol > 0.0) || opts.max_iter < 0)
    throw ContractError("flow_to_distinguished: tolerances must be positive");

  State s = evaluate(c0.scaled(1.0 / n0));
  check_finite(s, 0);
  const int r0 = numerical_rank(orbit_map_singular_values(s.c));
  FlowResult res{FlowStatus::MaxIterations, s.c};
  res.min_rank_sigma = component_rank_ratio(s.c);
  if (opts.record_trace) {
    res.objective_trace.push_back(s.f);
    res.residual_trace.push_back(s.residual);
  }

  auto finish = [&](FlowStatus st, int iter) {
    res.status = st;
    res.final = s.c;
    res.residual = s.residual;
    res.r = s.r;
    res.iterations = iter;
    return res;
  };
  auto orbit_ratio = [&]() {
    const Vector sv = orbit_map_singular_values(s.c);
    if (r0 == 0 || sv(0) == 0.0) return 0.0;
    return sv(r0 - 1) / sv(0);
  };

  double eta = opts.eta0;
  for (int iter = 0;; ++iter) {
    if (s.residual < opts.tol) {
      const double rank = component_rank_ratio(s.c);
      res.min_rank_sigma = std::min(res.min_rank_sigma, rank);
      res.orbit_sigma = orbit_ratio();
      if (rank < opts.rank_tol) {
        res.note = "component rank dropped";
        return finish(FlowStatus::Degenerated, iter);
      }
      if (res.orbit_sigma < opts.orbit_tol) {
        res.note = "limit left the orbit (orbit map lost rank)";
        return finish(FlowStatus::Degenerated, iter);
      }
      return finish(FlowStatus::DistinguishedFound, iter);
    }
    if (iter >= opts.max_iter) {
      res.orbit_sigma = orbit_ratio();
      return finish(FlowStatus::MaxIterations, iter);
    }
    if (opts.rank_check_every > 0 && iter % opts.rank_check_every == 0) {
      const double rank = component_rank_ratio(s.c);
      res.min_rank_sigma = std::min(res.min_rank_sigma, rank);
      if (rank < opts.rank_tol) {
        res.note = "component rank dropped";
        return finish(FlowStatus::Degenerated, iter);
      }
    }

    // The sphere gradient of |m|^2 is 4 (m(C).C - rC).
    const double gg = inner(s.grad, s.grad);
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      StructureTensor trial = axpy(s.c, -eta, s.grad);
      trial = trial.scaled(1.0 / norm(trial));
      State t = evaluate(std::move(trial));
      check_finite(t, iter + 1);
      const bool armijo = t.f <= s.f - opts.armijo * eta * 4.0 * gg;
      // Near the optimum F stops resolving decreases; accept steps that keep
      // F level while the residual still shrinks.
      const bool level = t.f <= s.f * (1.0 + 1e-15) && t.residual < s.residual;
      if (armijo || level) {
        if (t.f > s.f * (1.0 + 1e-15)) throw NumericalError("flow: objective increased at iteration " + std::to_string(iter));
        s = std::move(t);
        accepted = true;
        eta = std::min(eta * opts.eta_growth, opts.eta_max);
        break;
      }
      eta *= opts.backtrack;
    }
    if (!accepted) {
      res.note = "line search stalled";
      res.orbit_sigma = orbit_ratio();
      return finish(FlowStatus::MaxIterations, iter);
    }
    if (opts.record_trace) {
      res.objective_trace.push_back(s.f);
      res.residual_trace.push_back(s.residual);
    }
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StructureTensor random_tensor(int p, int q, std::uint64_t seed) {
  if (p < 1 || q < 2) throw ContractError("random_tensor: needs p >= 1, q >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix> mats;
  for (int k = 0; k < p; ++k) {
    Matrix m = Matrix::Zero(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = i + 1; j < q; ++j) {
        m(i, j) = normal(rng);
        m(j, i) = -m(i, j);
      }
    mats.push_back(std::move(m));
  }
  return StructureTensor(p, q, std::move(mats));
}

int worker_count(std::optional<int> requested) {
  int n = requested.value_or(static_cast<int>(std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("NILSOLITON_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

ScanSummary scan_generic(int p, int q, int trials, std::uint64_t seed, const FlowOptions& opts,
                         std::optional<int> threads) {
  if (q < 2 || p < 1 || p > so_dimension(q))
    throw ContractError("scan_generic: need 1 <= p <= q(q-1)/2, got (p,q) = (" + std::to_string(p) + "," +
                        std::to_string(q) + ")");
  if (trials < 1) throw ContractError("scan_generic: trials must be >= 1");

  ScanSummary sum;
  sum.p = p;
  sum.q = q;
  sum.trials = trials;
  sum.seed = seed;
  sum.results.resize(static_cast<std::size_t>(trials));

  std::atomic<int> next{0};
  std::vector<std::string> errors(static_cast<std::size_t>(trials));
  auto work = [&]() {
    for (int i = next++; i < trials; i = next++) {
      ScanTrial& t = sum.results[static_cast<std::size_t>(i)];
      t.seed = trial_seed(seed, static_cast<std::uint64_t>(i));
      try {
        const FlowResult r = flow_to_distinguished(random_tensor(p, q, t.seed), opts);
        t.status = r.status;
        t.residual = r.residual;
        t.iterations = r.iterations;
        t.orbit_sigma = r.orbit_sigma;
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  const int nw = std::min(worker_count(threads), trials);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (int i = 0; i < trials; ++i)
    if (!errors[static_cast<std::size_t>(i)].empty())
      throw NumericalError("scan trial " + std::to_string(i) + ": " + errors[static_cast<std::size_t>(i)]);

  for (int e = -17; e <= 0; ++e) sum.bin_edges.push_back(static_cast<double>(e));
  sum.histogram.assign(sum.bin_edges.size() - 1, 0);
  for (const auto& t : sum.results) {
    switch (t.status) {
      case FlowStatus::DistinguishedFound: ++sum.distinguished; break;
      case FlowStatus::Degenerated: ++sum.degenerated; break;
      case FlowStatus::MaxIterations: ++sum.max_iterations; break;
    }
    const double lg = t.residual > 0.0 ? std::log10(t.residual) : -17.0;
    const int bin = std::clamp(static_cast<int>(std::floor(lg)) + 17, 0, static_cast<int>(sum.histogram.size()) - 1);
    ++sum.histogram[static_cast<std::size_t>(bin)];
  }
  sum.fraction_distinguished = static_cast<double>(sum.distinguished) / trials;
  return sum;
}

std::string ScanSummary::histogram_csv() const {
  std::ostringstream os;
  os << "log10_residual_lo,log10_residual_hi,count\n";
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", bin_edges[i], bin_edges[i + 1], histogram[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace nilsoliton
