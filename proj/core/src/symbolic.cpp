#include "plab/symbolic.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

void check_symbol_count(int k) {
  if (k < 1 || k > kMaxSymbols)
    throw ValidationError("alphabet size k must be in 1.." + std::to_string(kMaxSymbols));
}

// strong connectivity of a k-node graph given successor masks
bool strongly_connected(const std::vector<uint16_t>& bits, int k) {
  auto reachable = [&](bool reverse) {
    uint32_t seen = 1u;  // from node 0
    uint32_t frontier = 1u;
    while (frontier) {
      uint32_t next = 0;
      for (int i = 0; i < k; ++i) {
        if (!((frontier >> i) & 1u)) continue;
        for (int j = 0; j < k; ++j) {
          const bool edge = reverse ? ((bits[j] >> i) & 1u) : ((bits[i] >> j) & 1u);
          if (edge && !((seen >> j) & 1u)) {
            seen |= 1u << j;
            next |= 1u << j;
          }
        }
      }
      frontier = next;
    }
    return seen;
  };
  const uint32_t all = (k == 32) ? ~0u : ((1u << k) - 1u);
  return reachable(false) == all && reachable(true) == all;
}

}  // namespace

Sft Sft::full_shift(int k) {
  check_symbol_count(k);
  std::vector<std::vector<int>> t(k, std::vector<int>(k, 1));
  return from_transitions(t);
}

Sft Sft::from_transitions(const std::vector<std::vector<int>>& t) {
  const int k = static_cast<int>(t.size());
  check_symbol_count(k);
  Sft s;
  s.k_ = k;
  s.bits_.assign(k, 0);
  s.succ_.assign(k, {});
  std::vector<bool> has_pred(k, false);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(t[i].size()) != k)
      throw ValidationError("transition matrix must be k x k");
    for (int j = 0; j < k; ++j) {
      if (t[i][j] != 0 && t[i][j] != 1)
        throw ValidationError("transition entries must be 0 or 1");
      if (t[i][j]) {
        s.bits_[i] |= static_cast<uint16_t>(1u << j);
        s.succ_[i].push_back(static_cast<uint8_t>(j));
        has_pred[j] = true;
      }
    }
    if (s.succ_[i].empty())
      throw ValidationError("dead symbol: row " + std::to_string(i) + " has no successor");
  }
  for (int j = 0; j < k; ++j)
    if (!has_pred[j])
      throw ValidationError("dead symbol: column " + std::to_string(j) + " has no predecessor");
  return s;
}

bool Sft::is_full_shift() const noexcept {
  const uint16_t full = static_cast<uint16_t>((1u << k_) - 1u);
  for (uint16_t row : bits_)
    if (row != full) return false;
  return true;
}

bool Sft::irreducible() const { return strongly_connected(bits_, k_); }

bool Sft::word_allowed(std::span<const uint8_t> w) const {
  for (uint8_t s : w)
    if (s >= k_) return false;
  for (size_t t = 0; t + 1 < w.size(); ++t)
    if (!allowed(w[t], w[t + 1])) return false;
  return true;
}

std::vector<uint64_t> count_words_from(const Sft& sft, int n) {
  if (n < 1) throw ValidationError("word length must be >= 1");
  const int k = sft.k();
  std::vector<uint64_t> c(k, 1);
  for (int step = 1; step < n; ++step) {
    std::vector<uint64_t> next(k, 0);
    for (int i = 0; i < k; ++i) {
      uint64_t acc = 0;
      for (uint8_t j : sft.successors(i)) {
        if (__builtin_add_overflow(acc, c[j], &acc))
          throw ValidationError("word count overflows 64 bits at length " + std::to_string(n));
      }
      next[i] = acc;
    }
    c.swap(next);
  }
  return c;
}

uint64_t count_words(const Sft& sft, int n) {
  const auto c = count_words_from(sft, n);
  uint64_t total = 0;
  for (uint64_t v : c) {
    if (__builtin_add_overflow(total, v, &total))
      throw ValidationError("word count overflows 64 bits at length " + std::to_string(n));
  }
  return total;
}

std::vector<Word> enumerate_words(const Sft& sft, int n, uint64_t word_budget) {
  const uint64_t total = count_words(sft, n);
  if (total > word_budget)
    throw BudgetError("word_budget",
                      "enumerating length-" + std::to_string(n) + " words needs " +
                          std::to_string(total) + " > word_budget " +
                          std::to_string(word_budget));
  std::vector<Word> out;
  out.reserve(static_cast<size_t>(total));
  for_each_word(sft, n, {}, [&](std::span<const uint8_t> w) {
    out.emplace_back(w.begin(), w.end());
  });
  return out;
}

std::vector<Word> prefix_partitions(const Sft& sft, int n, int prefix_len) {
  const int len = std::min(prefix_len, n);
  if (len < 1) throw ValidationError("prefix length must be >= 1");
  std::vector<Word> out;
  for_each_word(sft, len, {}, [&](std::span<const uint8_t> w) {
    out.emplace_back(w.begin(), w.end());
  });
  return out;
}

MarkovMeasure MarkovMeasure::bernoulli(std::vector<double> p) {
  const int k = static_cast<int>(p.size());
  check_symbol_count(k);
  std::vector<double> kernel(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) kernel[static_cast<size_t>(i) * k + j] = p[j];
  return markov(std::move(p), std::move(kernel));
}

MarkovMeasure MarkovMeasure::markov(std::vector<double> initial, std::vector<double> kernel) {
  const int k = static_cast<int>(initial.size());
  check_symbol_count(k);
  if (kernel.size() != static_cast<size_t>(k) * k)
    throw ValidationError("markov kernel must be k x k");
  double isum = 0.0;
  for (double v : initial) {
    if (!(v >= 0.0)) throw ValidationError("initial distribution entries must be >= 0");
    isum += v;
  }
  if (std::fabs(isum - 1.0) > 1e-12)
    throw ValidationError("initial distribution must sum to 1");
  for (int i = 0; i < k; ++i) {
    double rsum = 0.0;
    for (int j = 0; j < k; ++j) {
      const double v = kernel[static_cast<size_t>(i) * k + j];
      if (!(v >= 0.0)) throw ValidationError("kernel entries must be >= 0");
      rsum += v;
    }
    if (std::fabs(rsum - 1.0) > 1e-12)
      throw ValidationError("kernel row " + std::to_string(i) + " must sum to 1");
  }
  MarkovMeasure m;
  m.initial = std::move(initial);
  m.kernel = std::move(kernel);
  return m;
}

bool MarkovMeasure::is_bernoulli(double tol) const {
  const int n = k();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::fabs(kernel_at(i, j) - initial[j]) > tol) return false;
  return true;
}

bool MarkovMeasure::is_stationary(double tol) const {
  const int n = k();
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += initial[i] * kernel_at(i, j);
    if (std::fabs(s - initial[j]) > tol) return false;
  }
  return true;
}

bool MarkovMeasure::supported_on(const Sft& sft) const {
  if (sft.k() != k()) return false;
  const int n = k();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (kernel_at(i, j) > 0.0 && !sft.allowed(i, j)) return false;
  return true;
}

bool MarkovMeasure::ergodic() const {
  const int n = k();
  std::vector<uint16_t> bits(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (kernel_at(i, j) > 0.0) bits[i] |= static_cast<uint16_t>(1u << j);
  return strongly_connected(bits, n);
}

double measure_entropy(const MarkovMeasure& mu) {
  if (!mu.is_stationary())
    throw ValidationError("entropy needs a stationary measure: initial * kernel != initial");
  const int n = mu.k();
  double h = 0.0;
  for (int i = 0; i < n; ++i) {
    if (mu.initial[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double p = mu.kernel_at(i, j);
      if (p > 0.0) h -= mu.initial[i] * p * std::log(p);
    }
  }
  return h;
}

std::vector<double> stationary_distribution(const std::vector<double>& kernel, int k) {
  check_symbol_count(k);
  if (kernel.size() != static_cast<size_t>(k) * k)
    throw ValidationError("kernel must be k x k");
  std::vector<double> pi(k, 1.0 / k), next(k);
  for (int iter = 0; iter < 20000; ++iter) {
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += pi[i] * kernel[static_cast<size_t>(i) * k + j];
      next[j] = s;
    }
    double delta = 0.0, total = 0.0;
    for (int j = 0; j < k; ++j) {
      delta += std::fabs(next[j] - pi[j]);
      total += next[j];
    }
    for (int j = 0; j < k; ++j) pi[j] = next[j] / total;
    if (delta < 1e-15) break;
  }
  return pi;
}

}  // namespace plab
