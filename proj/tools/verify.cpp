#include "verify.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "plab/cones.hpp"
#include "plab/errors.hpp"
#include "plab/linalg.hpp"
#include "plab/rng.hpp"

namespace plab::tools {

namespace {

Matrix random_matrix(int d, SplitMix& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = lo + (hi - lo) * rng.uniform();
  return m;
}

VerifyCheck check(const std::string& name, bool passed, const std::string& detail) {
  return VerifyCheck{name, passed, detail};
}

VerifyCheck svf_submultiplicative() {
  SplitMix rng(0x5eedf00d);
  int violations = 0;
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Matrix a = random_matrix(d, rng);
      const Matrix b = random_matrix(d, rng);
      for (double s : {0.3, 0.7, 1.0, 1.5, 2.4, static_cast<double>(d)}) {
        const double lhs = svf_log(a * b, s);
        const double rhs = svf_log(a, s) + svf_log(b, s);
        if (lhs > rhs + 1e-9) ++violations;
        worst = std::max(worst, lhs - rhs);
      }
    }
  }
  return check("svf-submultiplicative", violations == 0,
               "worst log excess " + std::to_string(worst));
}

// log phi^s is concave in s: phi^s >= (phi^m)^((n-s)/(n-m)) (phi^n)^((s-m)/(n-m))
VerifyCheck svf_interpolation() {
  SplitMix rng(0xfeedbeef);
  int violations = 0;
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Matrix a = random_matrix(d, rng);
      for (int m = 0; m < d; ++m) {
        for (int n = m + 1; n <= d; ++n) {
          const double s = m + (n - m) * rng.uniform();
          const double lhs = svf_log(a, s);
          const double rhs = ((n - s) * svf_log(a, m) + (s - m) * svf_log(a, n)) / (n - m);
          if (lhs < rhs - 1e-9) ++violations;
        }
      }
    }
  }
  return check("svf-interpolation", violations == 0,
               violations == 0 ? "lower interpolation bound held" :
                                 std::to_string(violations) + " violations");
}

VerifyCheck svf_wedge_norm() {
  SplitMix rng(0xabcdef12);
  int violations = 0;
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Matrix a = random_matrix(d, rng);
      const SingularSpectrum sp = singular_values(a);
      for (int j = 1; j <= d; ++j) {
        const double wedge = operator_norm(exterior_power(a, j));
        double prod = 1.0;
        for (int i = 0; i < j; ++i) prod *= sp.alpha[static_cast<size_t>(i)];
        const double scale = std::max(1.0, prod);
        const double err = std::fabs(wedge - prod) / scale;
        if (err > 1e-9) ++violations;
        worst = std::max(worst, err);
      }
    }
  }
  return check("svf-wedge-norm", violations == 0, "worst relative error " + std::to_string(worst));
}

VerifyCheck svf_flags_consistency() {
  SplitMix rng(0x12345678);
  int mismatches = 0;
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Matrix a = random_matrix(d, rng);
      for (double s : {0.4, 1.0, 1.6, 2.0, 2.7}) {
        if (s > d) continue;
        const double scalar = svf_log(a, s);
        const double flags = generalized_svf_log(a, scalar_svf_weights(s, d));
        if (scalar != flags && !(std::isnan(scalar) && std::isnan(flags))) ++mismatches;
      }
    }
  }
  return check("svf-flags-exact-match", mismatches == 0,
               mismatches == 0 ? "scalar and flag evaluations identical"
                               : std::to_string(mismatches) + " mismatches");
}

VerifyCheck jacobi_golden() {
  const Matrix a = Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
  const SingularSpectrum sp = singular_values(a);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double err =
      std::fabs(sp.alpha[0] - phi) + std::fabs(sp.alpha[1] - 1.0 / phi);
  return check("jacobi-shear-exact", err <= 1e-12, "error " + std::to_string(err));
}

VerifyCheck cone_lemma_contraction() {
  const Matrix a = Matrix::from_rows({{10.0, 0.0}, {0.0, 0.1}});
  const std::vector<double> v{1.0, 0.0};
  const ConeContractionReport rep = cone_contraction_check(a, v, 10.0);
  return check("cone-contraction-lemma", rep.ok,
               "restricted norm " + std::to_string(rep.restricted_norm) + " vs threshold " +
                   std::to_string(rep.threshold) + ", margin " +
                   std::to_string(rep.certificate.margin));
}

VerifyCheck cone_rotation_fails() {
  const Matrix rot = Matrix::from_rows({{0.0, -1.0}, {1.0, 0.0}});
  const Cone k = Cone::around({1.0, 0.0}, 0.25);
  const ConeMapCertificate cert = maps_cone_into(rot, k, k, 1000);
  return check("cone-rotation-rejected", !cert.holds,
               "margin " + std::to_string(cert.margin));
}

VerifyCheck cone_almost_mult() {
  SplitMix rng(0x0c0ffee0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Cone k = Cone::around({inv_sqrt2, inv_sqrt2}, 0.3);
  int failures = 0;
  double min_c = 1.0;
  for (int round = 0; round < 25; ++round) {
    std::vector<Matrix> family;
    for (int i = 0; i < 4; ++i) family.push_back(random_matrix(2, rng, 0.2, 1.0));
    try {
      const double c = almost_mult_constant(family, k, k);
      min_c = std::min(min_c, c);
      if (!(c > 0.0)) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  return check("cone-almost-multiplicativity", failures == 0,
               "smallest constant " + std::to_string(min_c));
}

VerifyCheck cone_block_corollary() {
  const auto spec = HyperbolicClassSpec::make({{1, 5.0}, {1, -5.0}}, 0.01);
  const Matrix h = Matrix::from_rows({{std::exp(5.0), 0.0}, {0.0, std::exp(-5.0)}});
  const BlockDiagConeReport rep = block_diag_cone_check(h, spec);
  return check("cone-block-diagonal-corollary", rep.hypothesis_ok && rep.all_hold,
               "hypothesis constant " + std::to_string(rep.hypothesis_value));
}

VerifyCheck wedge_eigen_example() {
  const auto spec = HyperbolicClassSpec::make({{2, std::log(4.0)}, {1, -std::log(4.0)}}, 0.05);
  const Matrix h = Matrix::from_rows({{4.0, 0.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, 0.0, 0.25}});
  const WedgeEigenReport rep = wedge_eigen_check(h, spec, 1);
  const bool value_ok = std::fabs(rep.eigenvalue - 16.0) <= 1e-12;
  return check("wedge-eigenvector-bounds", rep.ok && value_ok,
               "eigenvalue " + std::to_string(rep.eigenvalue) + ", largest other image " +
                   std::to_string(rep.max_other));
}

std::vector<VerifyCheck> svf_suite() {
  return {svf_submultiplicative(), svf_interpolation(), svf_wedge_norm(),
          svf_flags_consistency(), jacobi_golden()};
}

std::vector<VerifyCheck> cones_suite() {
  return {cone_lemma_contraction(), cone_rotation_fails(), cone_almost_mult(),
          cone_block_corollary(), wedge_eigen_example()};
}

}  // namespace

std::vector<std::string> verify_suite_names() { return {"svf", "cones", "all"}; }

VerifyCommandResult run_verify_suite(const std::string& name) {
  VerifyCommandResult res;
  res.suite = name;
  if (name == "svf") {
    res.checks = svf_suite();
  } else if (name == "cones") {
    res.checks = cones_suite();
  } else if (name == "all") {
    res.checks = svf_suite();
    auto more = cones_suite();
    res.checks.insert(res.checks.end(), more.begin(), more.end());
  } else {
    std::string msg = "unknown verify suite '" + name + "'; available:";
    for (const auto& s : verify_suite_names()) msg += " " + s;
    throw ValidationError(msg);
  }
  res.all_passed = true;
  for (const auto& c : res.checks) res.all_passed = res.all_passed && c.passed;
  return res;
}

}  // namespace plab::tools
