#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "plab/errors.hpp"
#include "plab/rng.hpp"
#include "plab/symbolic.hpp"

using namespace plab;

namespace {

// forbids the pair (1,1); word counts follow the Fibonacci recursion
Sft golden_mean() { return Sft::from_transitions({{1, 1}, {1, 0}}); }

std::string word_str(const Word& w) {
  std::string s;
  for (uint8_t c : w) s += static_cast<char>('0' + c);
  return s;
}

Sft random_sft(SplitMix& rng, int k) {
  for (;;) {
    std::vector<std::vector<int>> t(k, std::vector<int>(k));
    for (auto& row : t)
      for (auto& cell : row) cell = rng.uniform() < 0.6 ? 1 : 0;
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      bool row = false, col = false;
      for (int j = 0; j < k; ++j) {
        row = row || t[i][j];
        col = col || t[j][i];
      }
      ok = row && col;
    }
    if (ok) return Sft::from_transitions(t);
  }
}

}  // namespace

TEST_CASE("word counts on full shifts and the golden-mean shift") {
  CHECK(count_words(Sft::full_shift(2), 3) == 8);
  CHECK(count_words(Sft::full_shift(3), 4) == 81);
  CHECK(count_words(Sft::full_shift(5), 1) == 5);

  const Sft gm = golden_mean();
  CHECK(count_words(gm, 1) == 2);
  CHECK(count_words(gm, 2) == 3);
  CHECK(count_words(gm, 3) == 5);
  CHECK(count_words(gm, 4) == 8);
  CHECK(count_words(gm, 5) == 13);
}

TEST_CASE("enumeration is lexicographic and complete") {
  const Sft gm = golden_mean();
  const auto words = enumerate_words(gm, 3, 1 << 20);
  REQUIRE(words.size() == 5);
  CHECK(word_str(words[0]) == "000");
  CHECK(word_str(words[1]) == "001");
  CHECK(word_str(words[2]) == "010");
  CHECK(word_str(words[3]) == "100");
  CHECK(word_str(words[4]) == "101");
}

TEST_CASE("count matches enumeration on random shifts") {
  SplitMix rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.next() % 3);
    const Sft sft = random_sft(rng, k);
    const int n_top = k == 2 ? 12 : (k == 3 ? 10 : 8);
    for (int n = 1; n <= n_top; n += 3) {
      CHECK(count_words(sft, n) == enumerate_words(sft, n, uint64_t{1} << 24).size());
    }
  }
}

TEST_CASE("full-shift words concatenate freely") {
  const Sft fs = Sft::full_shift(2);
  const auto w2 = enumerate_words(fs, 2, 1 << 20);
  const auto w3 = enumerate_words(fs, 3, 1 << 20);
  std::set<std::string> at5;
  for (const auto& w : enumerate_words(fs, 5, 1 << 20)) at5.insert(word_str(w));
  for (const auto& a : w2)
    for (const auto& b : w3) {
      Word cat = a;
      cat.insert(cat.end(), b.begin(), b.end());
      CHECK(at5.count(word_str(cat)) == 1);
    }
}

TEST_CASE("word_allowed checks adjacent transitions") {
  const Sft gm = golden_mean();
  const std::vector<uint8_t> ok{1, 0, 1};
  const std::vector<uint8_t> bad{0, 1, 1};
  CHECK(gm.word_allowed(ok));
  CHECK_FALSE(gm.word_allowed(bad));
}

TEST_CASE("prefix partitions cover the enumeration exactly once") {
  const Sft gm = golden_mean();
  const auto parts = prefix_partitions(gm, 5, 2);
  REQUIRE(parts.size() == 3);  // 00, 01, 10
  std::set<std::string> seen;
  for (const auto& p : parts) {
    for_each_word(gm, 5, p, [&](std::span<const uint8_t> w) {
      seen.insert(word_str(Word(w.begin(), w.end())));
    });
  }
  CHECK(seen.size() == count_words(gm, 5));
}

TEST_CASE("degenerate transition matrices are rejected") {
  CHECK_THROWS_AS((void)Sft::from_transitions({{0, 0}, {1, 0}}), ValidationError);  // dead row
  CHECK_THROWS_AS((void)Sft::from_transitions({{1, 1}, {0, 0}}), ValidationError);
  CHECK_THROWS_AS((void)Sft::from_transitions({{0, 1}, {0, 1}}), ValidationError);  // dead column
  CHECK_THROWS_AS((void)Sft::full_shift(0), ValidationError);
  CHECK_THROWS_AS((void)Sft::full_shift(17), ValidationError);
}

TEST_CASE("irreducibility by reachability") {
  CHECK(golden_mean().irreducible());
  CHECK(Sft::full_shift(3).irreducible());
  // 1 -> 0 impossible: reducible
  CHECK_FALSE(Sft::from_transitions({{1, 1}, {0, 1}}).irreducible());
}

TEST_CASE("bernoulli entropies") {
  CHECK(measure_entropy(MarkovMeasure::bernoulli({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(measure_entropy(MarkovMeasure::bernoulli({1.0, 0.0})) == 0.0);
  const double h = measure_entropy(MarkovMeasure::bernoulli({2.0 / 3.0, 1.0 / 3.0}));
  const double expect =
      -(2.0 / 3.0) * std::log(2.0 / 3.0) - (1.0 / 3.0) * std::log(1.0 / 3.0);
  CHECK(h == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("markov measures on the golden-mean shift") {
  const std::vector<double> kernel{0.5, 0.5, 1.0, 0.0};
  const auto pi = stationary_distribution(kernel, 2);
  CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto mu = MarkovMeasure::markov(pi, kernel);
  CHECK(mu.is_stationary());
  CHECK(mu.supported_on(golden_mean()));
  CHECK(mu.ergodic());
  CHECK_FALSE(mu.is_bernoulli());

  // entropy: only state 0 branches, with probability pi_0
  CHECK(measure_entropy(mu) == doctest::Approx((2.0 / 3.0) * std::log(2.0)).epsilon(1e-12));

  // kernel mass on the forbidden pair (1,1) is not supported
  const auto off = MarkovMeasure::markov({0.5, 0.5}, {0.5, 0.5, 0.5, 0.5});
  CHECK_FALSE(off.supported_on(golden_mean()));
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS((void)MarkovMeasure::bernoulli({0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS((void)MarkovMeasure::bernoulli({-0.2, 1.2}), ValidationError);
  CHECK_THROWS_AS((void)MarkovMeasure::markov({1.0}, {0.9, 0.1}), ValidationError);
}

TEST_CASE("budget overruns name the config key") {
  try {
    (void)enumerate_words(Sft::full_shift(4), 14, 1000);
    FAIL("expected a budget error");
  } catch (const BudgetError& e) {
    CHECK(e.config_key() == "word_budget");
  }
}
