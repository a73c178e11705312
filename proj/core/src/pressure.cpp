#include "plab/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kZeroCut = 1e-300;

// Streaming log-sum-exp state. Terms arrive as logs; -inf terms are exact
// zeros and are skipped, so S_n = 0 detection stays exact.
struct Accum {
  double m = kNegInf;
  double s = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  bool has_self = false;
};

inline void accum_term(Accum& a, double w) {
  if (w == kNegInf) return;
  if (w <= a.m) {
    a.s += std::exp(w - a.m);
  } else {
    a.s = a.s * std::exp(a.m - w) + 1.0;
    a.m = w;
  }
}

Accum merge_pair(const Accum& x, const Accum& y) {
  Accum r;
  r.min_ratio = std::min(x.min_ratio, y.min_ratio);
  r.has_self = x.has_self || y.has_self;
  if (y.m == kNegInf) {
    r.m = x.m;
    r.s = x.s;
  } else if (x.m == kNegInf) {
    r.m = y.m;
    r.s = y.s;
  } else if (x.m >= y.m) {
    r.m = x.m;
    r.s = x.s + y.s * std::exp(y.m - x.m);
  } else {
    r.m = y.m;
    r.s = y.s + x.s * std::exp(x.m - y.m);
  }
  return r;
}

// Fixed-shape binary tree over partition index; the reduction result does
// not depend on which worker computed which partition.
Accum tree_merge(std::vector<Accum> layer) {
  if (layer.empty()) return {};
  while (layer.size() > 1) {
    std::vector<Accum> next;
    next.reserve(layer.size() / 2 + 1);
    for (size_t i = 0; i + 1 < layer.size(); i += 2)
      next.push_back(merge_pair(layer[i], layer[i + 1]));
    if (layer.size() % 2) next.push_back(layer.back());
    layer.swap(next);
  }
  return layer[0];
}

inline double accum_log_sum(const Accum& a) {
  return a.m == kNegInf ? kNegInf : a.m + std::log(a.s);
}

struct Kernel {
  PressureMode mode;
  bool scalar;
  double s = 0.0;
  std::span<const double> weights;

  double operator()(const double* la, int d) const {
    if (mode == PressureMode::norm) {
      if (s == 0.0) return 0.0;
      if (la[0] == kNegInf) return kNegInf;
      return s * la[0];
    }
    if (scalar) return svf_log_from_log_alphas({la, static_cast<size_t>(d)}, s);
    return generalized_svf_log_from_log_alphas({la, static_cast<size_t>(d)}, weights);
  }
};

Kernel make_kernel(const Exponent& e, PressureMode mode, int d) {
  Kernel k;
  k.mode = mode;
  k.scalar = e.is_scalar();
  if (e.is_scalar()) {
    k.s = e.s();
  } else {
    if (mode == PressureMode::norm)
      throw ValidationError("norm pressure takes a scalar exponent, not s_vec");
    if (static_cast<int>(e.weights().size()) != d)
      throw ValidationError("s_vec length must equal the matrix dimension");
    k.weights = e.weights();
  }
  return k;
}

template <class F>
void parallel_over(size_t count, int workers, F&& body) {
  const int w = std::min<int>(std::max(workers, 1), static_cast<int>(std::min<size_t>(count, 64)));
  if (w <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto run = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

uint64_t checked_count(const Sft& sft, int n, uint64_t word_budget) {
  uint64_t count = 0;
  try {
    count = count_words(sft, n);
  } catch (const ValidationError&) {
    // count overflowed 64 bits, so it certainly exceeds any budget
    throw BudgetError("word_budget", "level " + std::to_string(n) +
                                         " word count overflows 64 bits; word_budget " +
                                         std::to_string(word_budget) + " exceeded");
  }
  if (count > word_budget)
    throw BudgetError("word_budget", "level " + std::to_string(n) + " has " +
                                         std::to_string(count) + " words > word_budget " +
                                         std::to_string(word_budget));
  return count;
}

}  // namespace

CocycleSpec CocycleSpec::make(Sft sft, std::vector<Matrix> matrices,
                              std::vector<double> potential) {
  CocycleSpec sp;
  const int k = sft.k();
  if (static_cast<int>(matrices.size()) != k)
    throw ValidationError("matrices: need exactly one matrix per symbol (k = " +
                          std::to_string(k) + ")");
  const int d = matrices[0].dim();
  if (d < 1 || d > kMaxAmbientDim)
    throw ValidationError("matrices: dimension must be in 1.." +
                          std::to_string(kMaxAmbientDim));
  for (const auto& m : matrices) {
    if (m.dim() != d) throw ValidationError("matrices: dimensions differ between symbols");
    if (!m.all_finite()) throw ValidationError("matrices: entries must be finite");
  }
  if (potential.empty()) potential.assign(static_cast<size_t>(k), 0.0);
  if (static_cast<int>(potential.size()) != k)
    throw ValidationError("potential: need one weight per symbol");
  for (double g : potential)
    if (!std::isfinite(g)) throw ValidationError("potential: weights must be finite");

  sp.sft = std::move(sft);
  sp.matrices = std::move(matrices);
  sp.potential = std::move(potential);
  sp.all_invertible = true;
  sp.contractive = true;
  sp.norms_below_half = true;
  for (const auto& m : sp.matrices) {
    const SingularSpectrum sv = singular_values(m);
    sp.op_norms.push_back(sv.alpha[0]);
    sp.min_singulars.push_back(sv.alpha[d - 1]);
    const double det = std::fabs(determinant(m));
    sp.log_abs_dets.push_back(det < kZeroCut ? kNegInf : std::log(det));
    const bool inv = det > 1e-12 * std::pow(sv.alpha[0], d);
    sp.invertible.push_back(inv);
    sp.all_invertible = sp.all_invertible && inv;
    sp.contractive = sp.contractive && sv.alpha[0] < 1.0;
    sp.norms_below_half = sp.norms_below_half && sv.alpha[0] < 0.5;
  }
  return sp;
}

Exponent Exponent::scalar(double s) {
  if (!std::isfinite(s) || s < 0.0)
    throw ValidationError("exponent s must be finite and >= 0");
  Exponent e;
  e.scalar_ = true;
  e.s_ = s;
  return e;
}

Exponent Exponent::flags(std::vector<double> weights) {
  if (weights.empty()) throw ValidationError("s_vec must be nonempty");
  if (!svf_weights_valid(weights, static_cast<int>(weights.size())))
    throw ValidationError("s_vec must be nonincreasing and nonnegative");
  for (double w : weights)
    if (!std::isfinite(w)) throw ValidationError("s_vec entries must be finite");
  Exponent e;
  e.scalar_ = false;
  e.weights_ = std::move(weights);
  return e;
}

double Exponent::total() const noexcept {
  if (scalar_) return s_;
  double t = 0.0;
  for (double w : weights_) t += w;
  return t;
}

PressureEngine::PressureEngine(CocycleSpec spec, Budgets budgets)
    : spec_(std::move(spec)), budgets_(budgets) {
  if (budgets_.workers < 1) budgets_.workers = 1;
  if (budgets_.cache_level_max < 0) budgets_.cache_level_max = 0;
}

PressureEngine::LevelData& PressureEngine::level(int n) { return levels_[n]; }

double PressureEngine::eval_level(LevelData& lv, int n, const Exponent& e, PressureMode mode,
                                  std::vector<double>* anchored) {
  const int d = spec_.dim();
  const Kernel kernel = make_kernel(e, mode, d);
  const size_t k = static_cast<size_t>(spec_.sft.k());

  // partitions are lexicographic, so parts sharing a first symbol are
  // contiguous; merge each group with the same fixed-shape reduction
  const auto finish_anchors = [&](std::vector<Accum> anchors, bool freeze) {
    if (!anchored && !freeze) return;
    if (anchored) anchored->assign(k, kNegInf);
    if (freeze) {
      lv.anchor_ratio.assign(k, kNegInf);
      lv.min_self_ratio = std::numeric_limits<double>::infinity();
      lv.has_self = false;
    }
    size_t i = 0;
    while (i < anchors.size()) {
      const size_t c = lv.parts[i][0];
      std::vector<Accum> group;
      for (; i < anchors.size() && lv.parts[i][0] == c; ++i) group.push_back(anchors[i]);
      const Accum merged = tree_merge(std::move(group));
      if (anchored) (*anchored)[c] = accum_log_sum(merged);
      if (freeze && merged.has_self) {
        lv.anchor_ratio[c] = merged.min_ratio;
        lv.has_self = true;
        lv.min_self_ratio = std::min(lv.min_self_ratio, merged.min_ratio);
      }
    }
  };

  if (lv.stats_ready && lv.cached) {
    // replay from the per-word singular value cache; weights and merge shape
    // are identical to the fresh pass bit for bit
    const bool want_anchor = anchored != nullptr;
    std::vector<Accum> accs(lv.parts.size());
    std::vector<Accum> anchor_accs(want_anchor ? lv.parts.size() : 0);
    parallel_over(lv.parts.size(), budgets_.workers, [&](size_t pi) {
      Accum acc;
      Accum anchor;
      const uint64_t beg = lv.part_offsets[pi];
      const uint64_t end =
          (pi + 1 < lv.parts.size()) ? lv.part_offsets[pi + 1] : lv.count;
      for (uint64_t u = beg; u < end; ++u) {
        const double term = lv.gsums[u] + kernel(&lv.log_alphas[u * d], d);
        accum_term(acc, term);
        if (want_anchor && lv.self_ok[u]) accum_term(anchor, term);
      }
      accs[pi] = acc;
      if (want_anchor) anchor_accs[pi] = anchor;
    });
    if (want_anchor) finish_anchors(std::move(anchor_accs), false);
    return accum_log_sum(tree_merge(std::move(accs)));
  }

  const bool first_touch = !lv.stats_ready;
  if (first_touch) {
    lv.count = checked_count(spec_.sft, n, budgets_.word_budget);
    const int plen = std::min(2, n);
    lv.parts = prefix_partitions(spec_.sft, n, plen);
    const auto continuations = count_words_from(spec_.sft, n - plen + 1);
    lv.part_offsets.resize(lv.parts.size());
    uint64_t off = 0;
    for (size_t pi = 0; pi < lv.parts.size(); ++pi) {
      lv.part_offsets[pi] = off;
      off += continuations[lv.parts[pi].back()];
    }
    const uint64_t bytes =
        lv.count * ((static_cast<uint64_t>(d) + 1) * sizeof(double) + 1);
    lv.cached = n <= budgets_.cache_level_max &&
                cache_bytes_used_ + bytes <= budgets_.cache_bytes;
    if (lv.cached) {
      lv.log_alphas.resize(lv.count * static_cast<uint64_t>(d));
      lv.gsums.resize(lv.count);
      lv.self_ok.resize(lv.count);
      cache_bytes_used_ += bytes;
    }
  }

  const bool write_cache = lv.cached;
  std::vector<Accum> accs(lv.parts.size());
  std::vector<Accum> anchor_accs(lv.parts.size());
  parallel_over(lv.parts.size(), budgets_.workers, [&](size_t pi) {
    const Word& prefix = lv.parts[pi];
    const int plen = static_cast<int>(prefix.size());
    Accum acc;
    Accum anchor;
    std::vector<ScaledMatrix> prod(static_cast<size_t>(n));
    std::vector<double> gsum(static_cast<size_t>(n));
    Word w(static_cast<size_t>(n));

    w[0] = prefix[0];
    prod[0] = ScaledMatrix(spec_.matrices[prefix[0]]);
    gsum[0] = spec_.g(prefix[0]);
    for (int t = 1; t < plen; ++t) {
      w[t] = prefix[t];
      prod[t - 1].right_multiply_into(spec_.matrices[prefix[t]], prod[t]);
      gsum[t] = gsum[t - 1] + spec_.g(prefix[t]);
    }

    uint64_t slot = write_cache ? lv.part_offsets[pi] : 0;
    double alpha[kMaxAmbientDim];
    double la_core[kMaxAmbientDim];
    double la_abs[kMaxAmbientDim];

    auto leaf = [&]() {
      const ScaledMatrix& p = prod[n - 1];
      if (p.is_zero()) {
        for (int i = 0; i < d; ++i) la_core[i] = la_abs[i] = kNegInf;
      } else {
        detail::jacobi_singular_values(p.core().data(), d, alpha);
        for (int i = 0; i < d; ++i) {
          if (alpha[i] < kZeroCut) {
            la_core[i] = la_abs[i] = kNegInf;
          } else {
            la_core[i] = std::log(alpha[i]);
            la_abs[i] = la_core[i] + p.log_scale();
          }
        }
      }
      const double term = gsum[n - 1] + kernel(la_abs, d);
      accum_term(acc, term);
      const bool self = spec_.sft.allowed(w[n - 1], w[0]);
      if (self) {
        accum_term(anchor, term);
        anchor.has_self = true;
        const double ratio =
            (la_core[0] == kNegInf || la_core[d - 1] == kNegInf)
                ? kNegInf
                : la_core[d - 1] - la_core[0];
        anchor.min_ratio = std::min(anchor.min_ratio, ratio);
      }
      if (write_cache) {
        std::copy(la_abs, la_abs + d, &lv.log_alphas[slot * d]);
        lv.gsums[slot] = gsum[n - 1];
        lv.self_ok[slot] = self ? 1 : 0;
        ++slot;
      }
    };

    auto walk = [&](auto&& self, int depth) -> void {
      if (depth == n) {
        leaf();
        return;
      }
      for (uint8_t sym : spec_.sft.successors(w[depth - 1])) {
        w[depth] = sym;
        prod[depth - 1].right_multiply_into(spec_.matrices[sym], prod[depth]);
        gsum[depth] = gsum[depth - 1] + spec_.g(sym);
        self(self, depth + 1);
      }
    };
    walk(walk, plen);
    accs[pi] = acc;
    anchor_accs[pi] = anchor;
  });

  finish_anchors(std::move(anchor_accs), first_touch);
  if (first_touch) lv.stats_ready = true;
  return accum_log_sum(tree_merge(std::move(accs)));
}

double PressureEngine::level_sum_log(const Exponent& e, PressureMode mode, int n) {
  if (n < 1) throw ValidationError("level n must be >= 1");
  return eval_level(level(n), n, e, mode);
}

double PressureEngine::pressure_upper(const Exponent& e, PressureMode mode, int n_max) {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n)
    best = std::min(best, level_sum_log(e, mode, n) / n);
  return best;
}

double PressureEngine::pressure_lower(const Exponent& e, PressureMode mode, int n) {
  if (n < 1) throw ValidationError("level n must be >= 1");
  LevelData& lv = level(n);
  if (spec_.sft.is_full_shift()) {
    const double log_sum = eval_level(lv, n, e, mode);
    if (log_sum == kNegInf) return kNegInf;
    if (!lv.has_self) return kNegInf;
    if (lv.min_self_ratio == kNegInf) return kNegInf;
    return (log_sum + e.total() * lv.min_self_ratio) / n;
  }
  std::vector<double> anchored;
  eval_level(lv, n, e, mode, &anchored);
  double best = kNegInf;
  for (size_t c = 0; c < anchored.size(); ++c) {
    if (anchored[c] == kNegInf || lv.anchor_ratio[c] == kNegInf) continue;
    best = std::max(best, (anchored[c] + e.total() * lv.anchor_ratio[c]) / n);
  }
  return best;
}

double PressureEngine::determinant_route_pressure(double s) const {
  const int k = spec_.k();
  const int d = spec_.dim();
  std::vector<double> log_u(static_cast<size_t>(k));
  double top = kNegInf;
  for (int i = 0; i < k; ++i) {
    const double ld = spec_.log_abs_dets[i];
    log_u[i] = ld == kNegInf ? kNegInf : spec_.g(i) + (s / d) * ld;
    top = std::max(top, log_u[i]);
  }
  if (top == kNegInf) return kNegInf;
  Matrix c(k);
  for (int i = 0; i < k; ++i) {
    if (log_u[i] == kNegInf) continue;
    const double u = std::exp(log_u[i] - top);
    for (int j = 0; j < k; ++j)
      if (spec_.sft.allowed(i, j)) c(i, j) = u;
  }
  const double rho = log_spectral_radius(c);
  return rho == kNegInf ? kNegInf : top + rho;
}

PressureEstimate PressureEngine::estimate(const Exponent& e, PressureMode mode, int n_max) {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  const int d = spec_.dim();
  PressureEstimate est;
  est.mode = mode;

  if (mode == PressureMode::svf && e.is_scalar() && e.s() > static_cast<double>(d)) {
    const double p = determinant_route_pressure(e.s());
    est.determinant_route = true;
    est.junction_applicable = true;
    est.lower = est.upper = est.point = p;
    return est;
  }

  std::vector<int> schedule;
  for (int n = 1; n <= std::min(12, n_max); ++n) schedule.push_back(n);
  for (int n : {16, 20, 24})
    if (n <= n_max) schedule.push_back(n);

  // fail on budget before any heavy work
  for (int n : schedule) checked_count(spec_.sft, n, budgets_.word_budget);

  est.upper = std::numeric_limits<double>::infinity();
  est.lower = kNegInf;
  const bool full = spec_.sft.is_full_shift();
  std::vector<double> anchored;
  for (int n : schedule) {
    LevelData& lv = level(n);
    const double log_sum = eval_level(lv, n, e, mode, full ? nullptr : &anchored);
    const double value = log_sum == kNegInf ? kNegInf : log_sum / n;
    est.levels.push_back({n, value});
    est.upper = std::min(est.upper, value);
    est.junction_applicable = est.junction_applicable || lv.has_self;
    if (full) {
      if (log_sum != kNegInf && lv.has_self && lv.min_self_ratio != kNegInf)
        est.lower = std::max(est.lower, (log_sum + e.total() * lv.min_self_ratio) / n);
    } else {
      for (size_t c = 0; c < anchored.size(); ++c) {
        if (anchored[c] == kNegInf || lv.anchor_ratio[c] == kNegInf) continue;
        est.lower = std::max(est.lower, (anchored[c] + e.total() * lv.anchor_ratio[c]) / n);
      }
    }
  }

  if (est.upper == kNegInf) {
    est.lower = est.point = kNegInf;
    return est;
  }
  if (est.lower > est.upper) {
    est.lower = est.upper;
    est.lower_clamped = true;
  }

  // extrapolate L_n against 1/n over the top three levels
  const size_t m = est.levels.size();
  const size_t take = std::min<size_t>(3, m);
  if (take == 1) {
    est.point = est.levels.back().value;
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = m - take; i < m; ++i) {
      const double x = 1.0 / est.levels[i].n;
      const double y = est.levels[i].value;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double nn = static_cast<double>(take);
    const double denom = nn * sxx - sx * sx;
    est.point = denom == 0.0 ? sy / nn : (sy * sxx - sx * sxy) / denom;
  }
  est.point = std::min(est.point, est.upper);
  if (est.lower != kNegInf) est.point = std::max(est.point, est.lower);
  return est;
}

double level_sum_log(const CocycleSpec& spec, const Exponent& e, PressureMode mode, int n,
                     const Budgets& budgets) {
  PressureEngine eng(spec, budgets);
  return eng.level_sum_log(e, mode, n);
}

double pressure_upper(const CocycleSpec& spec, const Exponent& e, PressureMode mode, int n_max,
                      const Budgets& budgets) {
  PressureEngine eng(spec, budgets);
  return eng.pressure_upper(e, mode, n_max);
}

double pressure_lower(const CocycleSpec& spec, const Exponent& e, PressureMode mode, int n,
                      const Budgets& budgets) {
  PressureEngine eng(spec, budgets);
  return eng.pressure_lower(e, mode, n);
}

PressureEstimate pressure_estimate(const CocycleSpec& spec, const Exponent& e, int n_max,
                                   const Budgets& budgets) {
  PressureEngine eng(spec, budgets);
  return eng.estimate(e, PressureMode::svf, n_max);
}

PressureEstimate norm_pressure(const CocycleSpec& spec, double s, int n_max,
                               const Budgets& budgets) {
  PressureEngine eng(spec, budgets);
  return eng.estimate(Exponent::scalar(s), PressureMode::norm, n_max);
}

double scalar_pressure_closed_form(const CocycleSpec& spec, double s) {
  if (spec.dim() != 1)
    throw ValidationError("closed-form pressure needs d = 1");
  if (!spec.sft.is_full_shift())
    throw ValidationError("closed-form pressure needs a full shift");
  if (!(s >= 0.0)) throw ValidationError("exponent s must be >= 0");
  Accum acc;
  for (int i = 0; i < spec.k(); ++i) {
    const double r = std::fabs(spec.matrices[i](0, 0));
    double term;
    if (s == 0.0) {
      term = spec.g(i);
    } else if (r < kZeroCut) {
      term = kNegInf;
    } else {
      term = spec.g(i) + s * std::log(r);
    }
    accum_term(acc, term);
  }
  return accum_log_sum(acc);
}

double log_spectral_radius(const Matrix& a) {
  ScaledMatrix p(a);
  if (p.is_zero()) return kNegInf;
  double exponent = 1.0;
  for (int it = 0; it < 46; ++it) {
    p = p * p;
    exponent *= 2.0;
    if (p.is_zero()) return kNegInf;
  }
  return p.log_frobenius() / exponent;
}

}  // namespace plab
