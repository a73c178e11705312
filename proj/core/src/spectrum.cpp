#include "plab/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "plab/errors.hpp"
#include "plab/rng.hpp"

namespace plab {

namespace {

constexpr double kZeroCut = 1e-300;
constexpr int kQrCadence = 16;

void check_measure(const CocycleSpec& spec, const MarkovMeasure& mu) {
  if (mu.k() != spec.k())
    throw ValidationError("measure alphabet size must match the system");
  if (!mu.supported_on(spec.sft))
    throw ValidationError("measure kernel puts mass on transitions the shift forbids");
  if (!mu.ergodic())
    throw ValidationError("measure kernel support must be strongly connected (ergodic)");
}

int sample_index(std::span<const double> weights, double u) {
  double c = 0.0;
  const int n = static_cast<int>(weights.size());
  for (int i = 0; i < n; ++i) {
    c += weights[i];
    if (u < c) return i;
  }
  return n - 1;
}

int sample_initial(const MarkovMeasure& mu, SplitMix& rng) {
  return sample_index(mu.initial, rng.uniform());
}

int sample_step(const MarkovMeasure& mu, int from, SplitMix& rng) {
  return sample_index(
      std::span<const double>(mu.kernel.data() + static_cast<size_t>(from) * mu.k(), mu.k()),
      rng.uniform());
}

// Householder QR of a (square); q receives Q, rdiag the absolute diagonal
// of R. Dead columns (norm below 1e-300) leave rdiag at 0.
void qr_decompose(const Matrix& a, Matrix& q, double* rdiag) {
  const int d = a.dim();
  Matrix r = a;
  q = Matrix::identity(d);
  double v[kMaxAmbientDim];
  for (int col = 0; col < d; ++col) {
    double norm2 = 0.0;
    for (int i = col; i < d; ++i) norm2 += r(i, col) * r(i, col);
    const double norm = std::sqrt(norm2);
    if (norm < kZeroCut) {
      rdiag[col] = 0.0;
      continue;
    }
    const double alpha = r(col, col) > 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (int i = col; i < d; ++i) {
      v[i] = r(i, col) - (i == col ? alpha : 0.0);
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 > 0.0) {
      for (int j = col; j < d; ++j) {
        double dot = 0.0;
        for (int i = col; i < d; ++i) dot += v[i] * r(i, j);
        const double f = 2.0 * dot / vnorm2;
        for (int i = col; i < d; ++i) r(i, j) -= f * v[i];
      }
      for (int i = 0; i < d; ++i) {
        double dot = 0.0;
        for (int l = col; l < d; ++l) dot += q(i, l) * v[l];
        const double f = 2.0 * dot / vnorm2;
        for (int l = col; l < d; ++l) q(i, l) -= f * v[l];
      }
    }
    rdiag[col] = std::fabs(r(col, col));
  }
}

template <class F>
void parallel_trials(int trials, int workers, F&& body) {
  const int w = std::min(std::max(workers, 1), std::min(trials, 64));
  if (w <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto run = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        body(t);
      } catch (...) {
        std::scoped_lock lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

struct MeanStd {
  double mean = 0.0;
  double std_error = 0.0;
  bool has_neg_inf = false;
};

MeanStd mean_and_stderr(std::span<const double> xs) {
  MeanStd r;
  for (double x : xs)
    if (x == kNegInf) r.has_neg_inf = true;
  if (r.has_neg_inf) {
    r.mean = kNegInf;
    return r;
  }
  const double n = static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return r;
}

// derivative of the quadratic through (xa,fa),(xb,fb),(xc,fc) at x
double lagrange3_deriv(double xa, double xb, double xc, double fa, double fb, double fc,
                       double x) {
  return fa * ((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc)) +
         fb * ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc)) +
         fc * ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb));
}

}  // namespace

LyapunovData lyapunov_spectrum(const CocycleSpec& spec, const MarkovMeasure& mu, int horizon,
                               int trials, uint64_t seed, double cluster_gap, int workers) {
  check_measure(spec, mu);
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(cluster_gap > 0.0)) throw ValidationError("cluster_gap must be > 0");
  const int d = spec.dim();

  // per trial, per direction: sorted descending log growth rates
  std::vector<std::vector<double>> rates(static_cast<size_t>(trials),
                                         std::vector<double>(static_cast<size_t>(d)));
  parallel_trials(trials, workers, [&](int trial) {
    SplitMix rng(stream_seed(seed, static_cast<uint64_t>(trial)));
    int sym = sample_initial(mu, rng);
    Matrix q = Matrix::identity(d);
    Matrix m(d), tmp(d);
    double rdiag[kMaxAmbientDim];
    double acc[kMaxAmbientDim] = {};
    bool dead[kMaxAmbientDim] = {};
    int pos = 0;
    while (pos < horizon) {
      const int block = std::min(kQrCadence, horizon - pos);
      m = q;
      for (int t = 0; t < block; ++t) {
        if (pos + t > 0) sym = sample_step(mu, sym, rng);
        mul_into(spec.matrices[sym], m, tmp);
        std::swap(m, tmp);
      }
      qr_decompose(m, q, rdiag);
      for (int j = 0; j < d; ++j) {
        if (dead[j]) continue;
        if (rdiag[j] < kZeroCut)
          dead[j] = true;
        else
          acc[j] += std::log(rdiag[j]);
      }
      pos += block;
    }
    auto& out = rates[static_cast<size_t>(trial)];
    for (int j = 0; j < d; ++j) out[j] = dead[j] ? kNegInf : acc[j] / horizon;
    std::sort(out.begin(), out.end(), std::greater<double>());
  });

  LyapunovData ly;
  ly.trials = trials;
  ly.horizon = horizon;
  ly.cluster_gap = cluster_gap;
  ly.raw_rates.resize(d);
  ly.raw_std_errors.resize(d);
  std::vector<double> column(static_cast<size_t>(trials));
  for (int j = 0; j < d; ++j) {
    for (int t = 0; t < trials; ++t) column[t] = rates[t][j];
    const MeanStd ms = mean_and_stderr(column);
    ly.raw_rates[j] = ms.mean;
    ly.raw_std_errors[j] = ms.std_error;
  }

  // cluster adjacent averaged rates; -inf directions form the final group
  std::vector<std::pair<int, int>> groups;  // [begin, end)
  int begin = 0;
  for (int j = 1; j <= d; ++j) {
    const bool split =
        j == d || ly.raw_rates[j] == kNegInf
            ? (j == d || ly.raw_rates[begin] != kNegInf)
            : (ly.raw_rates[j - 1] - ly.raw_rates[j] > cluster_gap);
    if (split) {
      groups.emplace_back(begin, j);
      begin = j;
    }
  }

  double cum_gamma = 0.0;
  int cum_t = 0;
  for (auto [b, e] : groups) {
    const int mult = e - b;
    double lam;
    double se = 0.0;
    if (ly.raw_rates[b] == kNegInf) {
      lam = kNegInf;
    } else {
      // group mean per trial, then mean/stderr across trials
      for (int t = 0; t < trials; ++t) {
        double g = 0.0;
        for (int j = b; j < e; ++j) g += rates[t][j];
        column[t] = g / mult;
      }
      const MeanStd ms = mean_and_stderr(column);
      lam = ms.mean;
      se = ms.std_error;
    }
    ly.exponents.push_back(lam);
    ly.multiplicities.push_back(mult);
    ly.std_errors.push_back(se);
    cum_t += mult;
    cum_gamma = (lam == kNegInf || cum_gamma == kNegInf) ? kNegInf : cum_gamma + mult * lam;
    ly.t_cum.push_back(cum_t);
    ly.gamma.push_back(cum_gamma);
  }
  return ly;
}

MonteCarloEstimate expected_svf_rate(const CocycleSpec& spec, const MarkovMeasure& mu, double s,
                                     int horizon, int trials, uint64_t seed, int workers) {
  check_measure(spec, mu);
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(s >= 0.0)) throw ValidationError("exponent s must be >= 0");

  const int d = spec.dim();
  // blocked QR accumulation as in lyapunov_spectrum (same trajectory per
  // seed/trial); a single product underflows its small singular values long
  // before typical horizons
  std::vector<double> values(static_cast<size_t>(trials));
  parallel_trials(trials, workers, [&](int trial) {
    SplitMix rng(stream_seed(seed, static_cast<uint64_t>(trial)));
    int sym = sample_initial(mu, rng);
    Matrix q = Matrix::identity(d);
    Matrix m(d), tmp(d);
    double rdiag[kMaxAmbientDim];
    double acc[kMaxAmbientDim] = {};
    bool dead[kMaxAmbientDim] = {};
    int pos = 0;
    while (pos < horizon) {
      const int block = std::min(kQrCadence, horizon - pos);
      m = q;
      for (int t = 0; t < block; ++t) {
        if (pos + t > 0) sym = sample_step(mu, sym, rng);
        mul_into(spec.matrices[sym], m, tmp);
        std::swap(m, tmp);
      }
      qr_decompose(m, q, rdiag);
      for (int j = 0; j < d; ++j) {
        if (dead[j]) continue;
        if (rdiag[j] < kZeroCut)
          dead[j] = true;
        else
          acc[j] += std::log(rdiag[j]);
      }
      pos += block;
    }
    double la[kMaxAmbientDim];
    for (int j = 0; j < d; ++j) la[j] = dead[j] ? kNegInf : acc[j];
    std::sort(la, la + d, std::greater<double>());
    const double v = svf_log_from_log_alphas({la, static_cast<size_t>(d)}, s);
    values[static_cast<size_t>(trial)] = v == kNegInf ? kNegInf : v / horizon;
  });

  const MeanStd ms = mean_and_stderr(values);
  MonteCarloEstimate est;
  est.value = ms.mean;
  est.std_error = ms.std_error;
  est.trials = trials;
  est.horizon = horizon;
  return est;
}

double svf_rate_from_exponents(const LyapunovData& ly, double s) {
  const int d = ly.t_cum.empty() ? 0 : ly.t_cum.back();
  if (!(s >= 0.0) || s > static_cast<double>(d))
    throw ValidationError("rate formula needs 0 <= s <= d");
  if (s == 0.0) return 0.0;
  double gamma_prev = 0.0;
  int t_prev = 0;
  for (size_t r = 0; r < ly.exponents.size(); ++r) {
    const int t_r = ly.t_cum[r];
    if (s <= static_cast<double>(t_r)) {
      const double lam = ly.exponents[r];
      if (lam == kNegInf) return kNegInf;
      return gamma_prev + (s - t_prev) * lam;
    }
    gamma_prev = ly.gamma[r];
    t_prev = t_r;
    if (gamma_prev == kNegInf) return kNegInf;
  }
  return gamma_prev;
}

LegendreSpectrum legendre_spectrum(const CocycleSpec& spec, const std::vector<double>& q_grid,
                                   int n_max, const Budgets& budgets) {
  if (q_grid.size() < 3)
    throw ValidationError("q_grid needs at least 3 points for finite differences");
  for (size_t i = 0; i < q_grid.size(); ++i) {
    if (!(q_grid[i] > 0.0)) throw ValidationError("q_grid must be positive");
    if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
      throw ValidationError("q_grid must be strictly increasing");
  }

  PressureEngine engine(spec, budgets);
  const size_t nq = q_grid.size();
  std::vector<double> m_vals(nq);
  for (size_t i = 0; i < nq; ++i)
    m_vals[i] =
        engine.estimate(Exponent::scalar(q_grid[i]), PressureMode::norm, n_max).point;

  LegendreSpectrum out;
  const double log_k = std::log(static_cast<double>(spec.k()));
  std::vector<double> alphas(nq);
  for (size_t i = 0; i < nq; ++i) {
    size_t a, b, c;
    if (i == 0) {
      a = 0, b = 1, c = 2;
    } else if (i == nq - 1) {
      a = nq - 3, b = nq - 2, c = nq - 1;
    } else {
      a = i - 1, b = i, c = i + 1;
    }
    alphas[i] = lagrange3_deriv(q_grid[a], q_grid[b], q_grid[c], m_vals[a], m_vals[b],
                                m_vals[c], q_grid[i]);
  }
  for (size_t i = 0; i < nq; ++i) {
    LegendrePoint p;
    p.q = q_grid[i];
    p.m = m_vals[i];
    p.alpha = alphas[i];
    p.h = m_vals[i] - alphas[i] * q_grid[i];
    out.points.push_back(p);
    if (!(p.h <= log_k + 1e-9) || !(p.h >= -1e-9)) out.admissible = false;
  }

  // concavity of the (alpha, h) graph: chord slopes nonincreasing; collapsed
  // alpha spacing marks a kink (linear M), skipped in the slope test
  const double kink_tol = 1e-12;
  std::vector<double> slopes;
  for (size_t i = 0; i + 1 < nq; ++i) {
    const double da = alphas[i + 1] - alphas[i];
    if (std::fabs(da) < kink_tol * (1.0 + std::fabs(alphas[i]))) {
      out.kink_flags.push_back(static_cast<int>(i));
      continue;
    }
    slopes.push_back((out.points[i + 1].h - out.points[i].h) / da);
  }
  for (size_t i = 0; i + 1 < slopes.size(); ++i)
    if (slopes[i + 1] > slopes[i] + 1e-6) out.concave_ok = false;
  return out;
}

EquilibriumReport equilibrium_scalar(const CocycleSpec& spec, double s) {
  if (spec.dim() != 1) throw ValidationError("equilibrium state needs d = 1");
  if (!spec.sft.is_full_shift())
    throw ValidationError("equilibrium state needs a full shift");
  if (!(s >= 0.0)) throw ValidationError("exponent s must be >= 0");

  const int k = spec.k();
  std::vector<double> logw(static_cast<size_t>(k), kNegInf);
  double top = kNegInf;
  for (int i = 0; i < k; ++i) {
    const double r = std::fabs(spec.matrices[i](0, 0));
    if (s == 0.0)
      logw[i] = spec.g(i);
    else if (r >= kZeroCut)
      logw[i] = spec.g(i) + s * std::log(r);
    top = std::max(top, logw[i]);
  }
  if (top == kNegInf)
    throw ValidationError("equilibrium undefined: every weight is zero");

  std::vector<double> p(static_cast<size_t>(k), 0.0);
  double z = 0.0;
  for (int i = 0; i < k; ++i) {
    if (logw[i] == kNegInf) continue;
    p[i] = std::exp(logw[i] - top);
    z += p[i];
  }
  for (double& v : p) v /= z;

  EquilibriumReport rep;
  rep.pressure = scalar_pressure_closed_form(spec, s);
  for (int i = 0; i < k; ++i) {
    if (p[i] <= 0.0) continue;
    rep.entropy -= p[i] * std::log(p[i]);
    const double r = std::fabs(spec.matrices[i](0, 0));
    rep.energy += p[i] * (spec.g(i) + s * (s == 0.0 ? 0.0 : std::log(r)));
  }
  rep.gap = std::fabs(rep.entropy + rep.energy - rep.pressure);
  rep.measure = MarkovMeasure::bernoulli(p);
  return rep;
}

}  // namespace plab
