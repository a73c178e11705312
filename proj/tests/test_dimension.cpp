#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "plab/dimension.hpp"
#include "plab/errors.hpp"
#include "plab/linalg.hpp"
#include "plab/pressure.hpp"
#include "plab/symbolic.hpp"

using namespace plab;

namespace {

CocycleSpec scalar_spec(std::vector<double> rs) {
  std::vector<Matrix> ms;
  for (double r : rs) ms.push_back(Matrix::from_rows({{r}}));
  return CocycleSpec::make(Sft::full_shift(static_cast<int>(rs.size())), std::move(ms));
}

Matrix rotation(double theta) {
  return Matrix::from_rows(
      {{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}});
}

// independent root of sum r_i^s = 1 on plain doubles
double moran_root(const std::vector<double>& rs) {
  double lo = 0.0, hi = 8.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double f = 0.0;
    for (double r : rs) f += std::pow(r, mid);
    (f > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("scalar dimension matches the Moran equation") {
  const auto res = singularity_dimension(scalar_spec({0.5, 1.0 / 3.0}), 1e-7, 8);
  const double oracle = moran_root({0.5, 1.0 / 3.0});
  CHECK(oracle == doctest::Approx(0.78788491102586966).epsilon(1e-12));
  CHECK(res.s_lower <= oracle);
  CHECK(oracle <= res.s_upper);
  CHECK(res.s_upper - res.s_lower <= 1e-7);
  CHECK_FALSE(res.budget_limited);
  CHECK(res.norm_warning);  // r = 1/2 sits exactly on the |A_i| < 1/2 threshold
  CHECK(res.iterations > 0);
  CHECK_FALSE(res.audit.empty());
  for (const auto& row : res.audit) {
    CHECK(row.lower <= row.point + 1e-12);
    CHECK(row.point <= row.upper + 1e-12);
  }

  // strictly below the threshold the warning stays quiet
  const auto quiet = singularity_dimension(scalar_spec({0.4, 1.0 / 3.0}), 1e-7, 8);
  CHECK_FALSE(quiet.norm_warning);
}

TEST_CASE("sign certificates bracket the root when both sides fire") {
  const auto res = singularity_dimension(scalar_spec({0.5, 1.0 / 3.0}), 1e-7, 8);
  // scalar brackets are tight, so both certificates exist and enclose the root
  CHECK(std::isfinite(res.certified_lower));
  CHECK(std::isfinite(res.certified_upper));
  CHECK(res.certified_lower <= 0.78788491102586966);
  CHECK(0.78788491102586966 <= res.certified_upper);
}

TEST_CASE("equal diagonal generators hit the piecewise closed form") {
  const Matrix a = Matrix::from_rows({{0.5, 0.0}, {0.0, 0.25}});
  const auto spec = CocycleSpec::make(Sft::full_shift(3), {a, a, a});
  const auto res = singularity_dimension(spec, 1e-8, 12);
  const double expect = 1.0 + (std::log(3.0) - std::log(2.0)) / std::log(4.0);
  CHECK(0.5 * (res.s_lower + res.s_upper) == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("conformal systems reduce to the scaled Moran equation") {
  const auto spec = CocycleSpec::make(
      Sft::full_shift(2), {0.5 * rotation(0.7), 0.5 * rotation(-0.2)});
  const auto res = singularity_dimension(spec, 1e-8, 6);
  CHECK(0.5 * (res.s_lower + res.s_upper) == doctest::Approx(1.0).epsilon(1e-6));

  const auto spec2 = CocycleSpec::make(
      Sft::full_shift(2), {0.45 * rotation(0.3), 0.45 * rotation(1.0)});
  const auto res2 = singularity_dimension(spec2, 1e-8, 6);
  const double expect = std::log(2.0) / (-std::log(0.45));
  CHECK(0.5 * (res2.s_lower + res2.s_upper) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("affinity dimension caps at the ambient dimension") {
  const Matrix h = Matrix::from_rows({{0.5, 0.0}, {0.0, 0.5}});
  std::vector<Matrix> four(4, h), eight(8, h);

  const auto res4 = affinity_dimension(CocycleSpec::make(Sft::full_shift(4), four), 1e-7, 4);
  CHECK(res4.affinity_upper == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(0.5 * (res4.s_lower + res4.s_upper) == doctest::Approx(2.0).epsilon(1e-6));

  const auto res8 = affinity_dimension(CocycleSpec::make(Sft::full_shift(8), eight), 1e-7, 4);
  CHECK(0.5 * (res8.s_lower + res8.s_upper) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(res8.affinity_lower == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res8.affinity_upper == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("non-contractive systems are rejected with an explanation") {
  const auto spec = CocycleSpec::make(
      Sft::full_shift(2), {Matrix::from_rows({{1.2, 0.0}, {0.0, 0.3}}),
                           Matrix::from_rows({{0.4, 0.0}, {0.0, 0.3}})});
  try {
    (void)singularity_dimension(spec, 1e-7, 6);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("contract") != std::string::npos);
  }
}

TEST_CASE("tolerances below the floor are rejected") {
  CHECK_THROWS_AS((void)singularity_dimension(scalar_spec({0.5, 0.4}), 1e-9, 6),
                  ValidationError);
}

TEST_CASE("norm warning fires when a generator is not below one half") {
  const auto spec = CocycleSpec::make(
      Sft::full_shift(2), {Matrix::from_rows({{0.6, 0.0}, {0.0, 0.3}}),
                           Matrix::from_rows({{0.4, 0.0}, {0.0, 0.2}})});
  const auto res = singularity_dimension(spec, 1e-7, 8);
  CHECK(res.norm_warning);
  CHECK(res.s_upper > 0.0);
}

TEST_CASE("budget overruns surface as budget errors") {
  Budgets b;
  b.word_budget = 16;
  const Matrix a = Matrix::from_rows({{0.4, 0.1}, {0.0, 0.3}});
  const auto spec = CocycleSpec::make(Sft::full_shift(2), {a, a});
  CHECK_THROWS_AS((void)singularity_dimension(spec, 1e-7, 10, b), BudgetError);
}

TEST_CASE("single-matrix joint spectral radius is the spectral radius") {
  const auto res = jsr_estimate({Matrix::from_rows({{2.0, 0.0}, {0.0, 3.0}})}, 3);
  CHECK(res.lower == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(res.upper == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(res.band_lower <= 3.0 + 1e-12);
  CHECK(3.0 <= res.band_upper + 1e-12);
}

TEST_CASE("identity pair has joint spectral radius one") {
  const auto res = jsr_estimate({Matrix::identity(2), Matrix::identity(2)}, 4);
  CHECK(res.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shear pair attains the golden ratio at depth two") {
  const std::vector<Matrix> pair{Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}),
                                 Matrix::from_rows({{1.0, 0.0}, {1.0, 1.0}})};
  const auto res = jsr_estimate(pair, 2);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::fabs(res.lower - phi) <= 1e-10);
  CHECK(res.upper >= phi - 1e-12);
  CHECK(res.band_lower <= phi);
  CHECK(phi <= res.band_upper);
  CHECK(res.n == 2);
}

TEST_CASE("jsr input validation") {
  CHECK_THROWS_AS((void)jsr_estimate({}, 2), ValidationError);
  CHECK_THROWS_AS((void)jsr_estimate({Matrix::identity(2)}, 0), ValidationError);
  Budgets b;
  b.word_budget = 4;
  CHECK_THROWS_AS(
      (void)jsr_estimate({Matrix::identity(2), Matrix::identity(2)}, 12, 64.0, b),
      BudgetError);
}
