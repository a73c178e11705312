#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace plab {

inline constexpr int kMaxSymbols = 16;

using Word = std::vector<uint8_t>;

/// Subshift of finite type on symbols {0..k-1} with a 0/1 transition matrix.
/// A word i_1...i_n is allowed when every adjacent pair (i_t, i_{t+1}) has a
/// 1 in the matrix. Every symbol must have at least one successor and one
/// predecessor; dead rows or columns are rejected at construction.
class Sft {
 public:
  Sft() = default;

  static Sft full_shift(int k);
  /// t is k x k with entries 0 or 1.
  static Sft from_transitions(const std::vector<std::vector<int>>& t);

  int k() const noexcept { return k_; }
  bool allowed(int i, int j) const noexcept {
    return (bits_[static_cast<size_t>(i)] >> j) & 1u;
  }
  /// Successors of i, ascending. Drives lexicographic enumeration.
  const std::vector<uint8_t>& successors(int i) const { return succ_[static_cast<size_t>(i)]; }

  bool is_full_shift() const noexcept;
  /// Strong connectivity of the transition graph.
  bool irreducible() const;

  bool word_allowed(std::span<const uint8_t> w) const;

 private:
  int k_ = 0;
  std::vector<uint16_t> bits_;
  std::vector<std::vector<uint8_t>> succ_;
};

/// Number of allowed words of length n. Throws ValidationError when the
/// count overflows 64 bits.
uint64_t count_words(const Sft& sft, int n);

/// counts[i] = number of allowed length-n words starting at symbol i.
std::vector<uint64_t> count_words_from(const Sft& sft, int n);

/// All allowed words of length n in lexicographic order. Throws BudgetError
/// ("word_budget") when the count exceeds the budget.
std::vector<Word> enumerate_words(const Sft& sft, int n, uint64_t word_budget);

/// Allowed words of length min(prefix_len, n), lexicographic. Each one seeds
/// an independent sub-stream of the length-n enumeration, which is how the
/// level sums parallelize deterministically.
std::vector<Word> prefix_partitions(const Sft& sft, int n, int prefix_len);

namespace detail {

template <class F>
void walk_words(const Sft& sft, int n, Word& w, F& leaf) {
  if (static_cast<int>(w.size()) == n) {
    leaf(std::span<const uint8_t>(w));
    return;
  }
  for (uint8_t s : sft.successors(w.back())) {
    w.push_back(s);
    walk_words(sft, n, w, leaf);
    w.pop_back();
  }
}

}  // namespace detail

/// Depth-first lexicographic traversal of allowed length-n words starting
/// with `prefix` (may be empty). Calls leaf(word) for each complete word.
template <class F>
void for_each_word(const Sft& sft, int n, std::span<const uint8_t> prefix, F&& leaf) {
  if (n <= 0) return;
  Word w(prefix.begin(), prefix.end());
  if (static_cast<int>(w.size()) > n || !sft.word_allowed(w)) return;
  w.reserve(static_cast<size_t>(n));
  if (w.empty()) {
    for (int s = 0; s < sft.k(); ++s) {
      w.push_back(static_cast<uint8_t>(s));
      detail::walk_words(sft, n, w, leaf);
      w.pop_back();
    }
  } else {
    detail::walk_words(sft, n, w, leaf);
  }
}

/// Markov (or Bernoulli) measure on an Sft: initial distribution plus a
/// row-stochastic kernel. Bernoulli means all kernel rows equal the initial
/// vector.
struct MarkovMeasure {
  std::vector<double> initial;
  std::vector<double> kernel;  // k x k row-major

  static MarkovMeasure bernoulli(std::vector<double> p);
  static MarkovMeasure markov(std::vector<double> initial, std::vector<double> kernel);

  int k() const noexcept { return static_cast<int>(initial.size()); }
  double kernel_at(int i, int j) const noexcept {
    return kernel[static_cast<size_t>(i) * initial.size() + j];
  }
  bool is_bernoulli(double tol = 1e-12) const;
  /// initial * kernel == initial within tol.
  bool is_stationary(double tol = 1e-10) const;
  /// Every kernel transition with positive mass is allowed by the sft.
  bool supported_on(const Sft& sft) const;
  /// Support graph of the kernel is strongly connected.
  bool ergodic() const;
};

/// Entropy of a stationary Markov measure: -sum_i pi_i sum_j P_ij log P_ij
/// (0 log 0 = 0). Throws ValidationError when the measure is not stationary.
double measure_entropy(const MarkovMeasure& mu);

/// Stationary distribution of a row-stochastic kernel (power iteration).
std::vector<double> stationary_distribution(const std::vector<double>& kernel, int k);

}  // namespace plab
