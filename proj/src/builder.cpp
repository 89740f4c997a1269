#include "heisrect/builder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "heisrect/errors.hpp"
#include "heisrect/fit.hpp"
#include "heisrect/graph.hpp"
#include "heisrect/sampling.hpp"

namespace heisrect {

namespace {

// Runs fn(i) for i in [0, count) on a few threads; each i writes only its own slot.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::min(16u, std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double scale_bound(double A, int level, double alpha) { return A * std::exp2(-level * (1.0 + alpha)); }

double slack(const HPoint& a, const HPoint& b) { return std::max(rounding_floor(a), rounding_floor(b)); }

std::string describe(const GPoint& g) {
  std::ostringstream s;
  s << "(";
  for (int i = 0; i < g.zdim(); ++i) s << g.z[i] << ", ";
  s << g.s << ", " << g.t << ")";
  return s.str();
}

}  // namespace

double geometric_constant(double alpha) { return 1.0 / (1.0 - std::exp2(-(1.0 + alpha))); }

N0Thresholds n0_thresholds(double L, double A, double alpha, double tau) {
  if (!(L > 0.0) || !(A >= 0.0) || !(tau > 0.0)) throw UsageError("compute_n0 needs L, tau > 0 and A >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("alpha must lie in (0, 1]");
  const double G = geometric_constant(alpha);
  const double lift = std::exp2(1.0 + alpha / 2.0);
  const double ninf = -std::numeric_limits<double>::infinity();
  N0Thresholds t;
  t.separation = A > 0.0 ? 2.0 / alpha * std::log2(4.0 * L * A * lift / tau) : ninf;
  t.tail = A > 0.0 ? 2.0 / alpha * std::log2(8.0 * L * A * G * lift / tau) : ninf;
  t.distortion = std::log2(2.0 * (L + A * (1.0 + G)));
  t.scale = std::log2(4.0 * L);
  const double m = std::max({0.0, t.separation, t.tail, t.distortion, t.scale});
  t.n0 = static_cast<int>(std::ceil(m - 1e-12));
  return t;
}

int compute_n0(double L, double A, double alpha, double tau) { return n0_thresholds(L, A, alpha, tau).n0; }

int compute_n0(double L, double A, double alpha, const std::function<double(int)>& tau_of, int limit) {
  for (int n0 = 0; n0 <= limit; ++n0)
    if (n0 >= compute_n0(L, A, alpha, tau_of(n0))) return n0;
  throw NumericalFailure("no admissible n0 below " + std::to_string(limit));
}

BuildResult build_map(const CorrespondenceOracle& oracle, const CantorRealization& cantor,
                      const std::vector<KeptPoint>& kept, const BuildParams& params, bool enforce, int pairs,
                      std::uint64_t seed) {
  if (params.n0 != cantor.n0 || params.nmax != cantor.nmax) throw UsageError("build levels differ from the Cantor set");
  if (oracle.n() != cantor.n || params.p0.n != cantor.n) throw UsageError("oracle, Cantor set and p0 disagree on n");
  if (kept.size() < 2) throw UsageError("the map needs at least two kept points");
  const int depth = params.nmax - params.n0;
  const std::size_t N = kept.size();
  const double alpha = oracle.declared_alpha();

  BuildResult out;
  MapTable& T = out.table;
  T.n0 = params.n0;
  T.nmax = params.nmax;
  T.p0 = params.p0;
  T.F.assign(N, std::vector<HPoint>(depth + 1));
  T.increment.assign(N, std::vector<double>(depth + 1, 0.0));
  for (const auto& k : kept) T.g.push_back(k.g);

  std::vector<HPoint> P(N, params.p0);
  std::vector<GPoint> C(N);
  for (int k = 0; k <= depth; ++k) {
    const int level = params.n0 + k;
    std::map<std::vector<std::int32_t>, std::size_t> ids;
    std::vector<std::size_t> cube_of(N), owner;
    for (std::size_t i = 0; i < N; ++i) {
      std::vector<std::int32_t> key;
      for (const auto& axis : kept[i].cell) key.push_back(axis[k]);
      auto [it, fresh] = ids.emplace(std::move(key), owner.size());
      if (fresh) owner.push_back(i);
      cube_of[i] = it->second;
    }
    // P(Q) = F_{n-1}(c_Q), computed once per cube from the parent's data
    std::vector<HPoint> cubeP(owner.size());
    std::vector<GPoint> cubeC(owner.size());
    parallel_for(owner.size(), [&](std::size_t j) {
      const std::size_t i = owner[j];
      cubeC[j] = core_center(cantor, kept[i], level);
      cubeP[j] = k == 0 ? params.p0 : oracle.eval(level - 1, C[i], P[i], cubeC[j]);
    });
    for (std::size_t i = 0; i < N; ++i) {
      P[i] = cubeP[cube_of[i]];
      C[i] = cubeC[cube_of[i]];
    }
    parallel_for(N, [&](std::size_t i) {
      T.F[i][k] = oracle.eval(level, C[i], P[i], T.g[i]);
      const HPoint& before = k == 0 ? params.p0 : T.F[i][k - 1];
      T.increment[i][k] = dist(before, T.F[i][k]);
    });
  }

  BilipAudit& a = out.audit;
  a.L = oracle.declared_L();
  a.A = oracle.declared_A();
  a.alpha = alpha;
  const double G = geometric_constant(alpha);
  for (int k = 0; k < depth; ++k) {
    const int level = params.n0 + k;
    const double bound = scale_bound(a.A, level, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double inc = T.increment[i][k + 1];
      worst = std::max(worst, inc);
      if (inc > bound + slack(T.F[i][k], T.F[i][k + 1])) {
        a.increments_ok = false;
        if (enforce) {
          std::ostringstream msg;
          msg << "increment " << inc << " exceeds " << bound << " at level " << level << " in the cube centred at "
              << describe(core_center(cantor, kept[i], level));
          throw InvariantViolation(msg.str());
        }
      }
    }
    a.level_increments.push_back(worst);
    a.level_bounds.push_back(bound);
    a.increment_sum += worst;
  }
  a.geometric_bound = scale_bound(a.A, params.n0, alpha) * G;
  a.residual_bound = scale_bound(a.A, params.nmax, alpha) * G;
  audit_bilip(T, a, pairs, seed);
  return out;
}

void audit_bilip(const MapTable& T, BilipAudit& a, int pairs, std::uint64_t seed) {
  const std::size_t N = T.g.size();
  if (N < 2) throw UsageError("the audit needs at least two table entries");
  const int depth = T.nmax - T.n0;

  // Cauchy cascade: the tail of the level maxima bounds the remaining travel
  for (std::size_t i = 0; i < N; ++i) {
    double tail = 0.0;
    for (int k = depth - 1; k >= 0; --k) {
      if (k < static_cast<int>(a.level_increments.size())) tail += a.level_increments[k];
      const double d = dist(T.F[i][k], T.final(i));
      if (d > tail * (1 + 1e-9) + slack(T.F[i][k], T.final(i))) a.cauchy_ok = false;
    }
    a.max_radius = std::max(a.max_radius, dist(T.p0, T.final(i)));
  }
  a.ball_ok = a.max_radius <= 1.0;

  Sampler rng(seed);
  a.ratio_min = std::numeric_limits<double>::infinity();
  a.ratio_max = 0.0;
  a.pairs = 0;
  for (int s = 0; s < pairs; ++s) {
    const std::size_t i = rng.index(N);
    std::size_t j = rng.index(N - 1);
    if (j >= i) ++j;
    const double dg = model_dist(T.g[i], T.g[j]);
    if (!(dg > 0.0)) continue;
    const double r = dist(T.final(i), T.final(j)) / dg;
    a.ratio_min = std::min(a.ratio_min, r);
    a.ratio_max = std::max(a.ratio_max, r);
    ++a.pairs;
  }
  a.ratios_ok = a.pairs > 0 && a.ratio_min >= 1.0 / (2.0 * a.L) && a.ratio_max <= 2.0 * a.L;
}

namespace {

struct SamplePair {
  std::size_t base;
  GPoint y, z;
};

std::vector<SamplePair> draw_pairs(const std::vector<BasePoint>& bases, int level, int samples, std::uint64_t seed) {
  if (bases.empty()) throw UsageError("verification needs at least one base point");
  if (samples < 10) throw UsageError("verification needs at least 10 samples per base point");
  Sampler rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(level + 1)));
  const double r = std::ldexp(1.0, -level);
  std::vector<SamplePair> out;
  for (std::size_t b = 0; b < bases.size(); ++b)
    for (int s = 0; s < samples; ++s) {
      const GPoint& x = bases[b].first;
      // every fourth pair is anchored at the base point itself
      out.push_back({b, s % 4 == 0 ? x : rng.gball(x, r), rng.gball(x, r)});
    }
  return out;
}

}  // namespace

IsoFit verify_iso(const CorrespondenceOracle& oracle, int level, const std::vector<BasePoint>& bases, int samples,
                  std::uint64_t seed, double slack_factor) {
  const auto draws = draw_pairs(bases, level, samples, seed);
  struct Obs {
    double dg = 0.0, dm = 0.0, dmodel = 0.0, floor = 0.0;
  };
  std::vector<Obs> obs(draws.size());
  parallel_for(draws.size(), [&](std::size_t s) {
    const auto& [b, y, z] = draws[s];
    const auto& [x, p] = bases[b];
    obs[s].dg = model_dist(y, z);
    const HPoint my = oracle.eval(level, x, p, y), mz = oracle.eval(level, x, p, z);
    obs[s].dm = dist(my, mz);
    const GPoint xi = model_inv(x);
    const HPoint ey = oracle.model_rel(level, p, model_mul(xi, y)), ez = oracle.model_rel(level, p, model_mul(xi, z));
    obs[s].dmodel = dist(ey, ez);
    obs[s].floor = std::max({slack(my, mz), slack(ey, ez), rounding_floor(model_to_w(y)), rounding_floor(model_to_w(z))});
  });

  IsoFit fit;
  fit.level = level;
  double distortion = 1.0;
  for (const auto& o : obs) {
    if (!(o.dg > 0.0)) continue;
    ++fit.samples;
    // distances below the rounding floor carry no information
    distortion = std::max({distortion, (o.dmodel - o.floor) / o.dg, (o.dg - o.floor) / o.dmodel});
    fit.envelope = std::max(fit.envelope, std::abs(o.dm - o.dmodel));
  }
  // 64-point logarithmic grid on [1, 64]
  fit.L = distortion;
  for (int k = 0; k < 64; ++k) {
    const double L = std::pow(64.0, k / 63.0);
    if (L >= distortion * (1 - 1e-12)) {
      fit.L = L;
      break;
    }
  }
  const double unit = std::exp2(-level * (1.0 + oracle.declared_alpha()));
  for (const auto& o : obs) {
    if (!(o.dg > 0.0)) continue;
    fit.A = std::max({fit.A, (o.dg / fit.L - o.dm - o.floor) / unit, (o.dm - fit.L * o.dg - o.floor) / unit});
  }
  fit.pass = fit.L <= slack_factor * oracle.declared_L() && fit.A <= slack_factor * oracle.declared_A();
  return fit;
}

CompFit verify_comp(const CorrespondenceOracle& oracle, int level, const std::vector<BasePoint>& bases, int samples,
                    std::uint64_t seed) {
  const auto draws = draw_pairs(bases, level, samples, seed + 1);
  std::vector<double> dev(draws.size(), 0.0);
  parallel_for(draws.size(), [&](std::size_t s) {
    const auto& [b, y, z] = draws[s];
    const auto& [x, p] = bases[b];
    const HPoint q = oracle.eval(level, x, p, y);
    dev[s] = dist(oracle.eval(level, x, p, z), oracle.eval(level + 1, y, q, z));
  });
  CompFit fit;
  fit.level = level;
  fit.samples = static_cast<int>(dev.size());
  for (double d : dev) fit.deviation = std::max(fit.deviation, d);
  fit.A = fit.deviation / std::exp2(-level * (1.0 + oracle.declared_alpha()));
  return fit;
}

ScaleSweep sweep_scales(const CorrespondenceOracle& oracle, int first, int last, const std::vector<BasePoint>& bases,
                        int samples, std::uint64_t seed, bool iso, bool comp) {
  if (last < first) throw UsageError("empty scale range");
  ScaleSweep s;
  std::vector<double> n, env, scale, dev;
  for (int level = first; level <= last; ++level) {
    if (iso) {
      s.iso.push_back(verify_iso(oracle, level, bases, samples, seed));
      if (s.iso.back().envelope > 0.0) {
        n.push_back(level);
        env.push_back(std::log2(s.iso.back().envelope));
      }
    }
    if (comp) {
      s.comp.push_back(verify_comp(oracle, level, bases, samples, seed));
      scale.push_back(std::ldexp(1.0, -level));
      dev.push_back(s.comp.back().deviation);
    }
  }
  if (n.size() >= 2) s.envelope_slope = fit_line(n, env).slope;
  if (comp && std::count_if(dev.begin(), dev.end(), [](double d) { return d > 0.0; }) >= 2)
    s.comp_slope = fit_loglog(scale, dev).slope;
  return s;
}

}  // namespace heisrect
