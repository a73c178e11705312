#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plab/dimension.hpp"
#include "plab/pressure.hpp"

namespace plab {

/// Normalizes a stacked perturbation direction to unit Frobenius norm
/// (norm of the concatenation of all matrices). Throws ValidationError for
/// an empty or zero direction or mismatched dimensions.
std::vector<Matrix> make_direction(std::vector<Matrix> raw);

/// base matrices + eps * direction, revalidated through CocycleSpec::make.
CocycleSpec perturb(const CocycleSpec& base, const std::vector<Matrix>& direction, double eps);

/// One perturbation experiment: a base cocycle, a unit direction, and the
/// epsilon/s grids it is evaluated over at a fixed level budget.
struct PerturbationScan {
  CocycleSpec base;
  std::vector<Matrix> direction;
  std::vector<double> epsilons;  // positive, strictly ascending
  std::vector<double> s_values;  // pressure exponents; ignored by dimension_scan
  int n_max = 6;
  double dimension_tol = 1e-8;
  Budgets budgets;
};

/// Flat grid report: one row per grid point, a parallel note per row ("" for
/// clean rows, an error or skip annotation otherwise), and named summary
/// scalars in a fixed order. Booleans are encoded 1/0 so the whole table
/// serializes uniformly.
struct ScanReport {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_notes;
  std::vector<std::pair<std::string, double>> summary;
};

/// Pressure under perturbation: rows (eps, s, bracket, point, |point delta|
/// vs base, upper-bound gap vs base) for eps = 0 and each grid eps. The
/// summary flags whether the worst positive upper-bound gap shrinks as eps
/// does (fixed-n upper semicontinuity, observed on the grid) and records
/// the final gap. Row-level failures are annotated and the scan continues.
ScanReport pressure_scan(const PerturbationScan& scan);

/// Singularity dimension under perturbation: rows (eps, bracket, midpoint,
/// |midpoint delta| vs base, norm warning). Perturbed specs that lose
/// contractivity are skipped with a note.
ScanReport dimension_scan(const PerturbationScan& scan);

/// Pressure over a (magnitude, s) grid at magnitudes {0, eps/4, eps/2, eps},
/// checking the invertible-case Lipschitz bound in s: the distance between
/// the pressure brackets of adjacent s values must not exceed
/// |s - s'| * max(|log C|, |log D|), C the largest operator norm and D the
/// smallest singular value among the perturbed generators. Requires an
/// invertible base cocycle.
ScanReport joint_continuity_scan(const CocycleSpec& spec, const std::vector<Matrix>& direction,
                                 const std::vector<double>& s_grid, double eps, int n_max,
                                 const Budgets& budgets = {});

/// Built-in rank-drop example: both generators [[1/2,0],[0,0]]. Pressure is
/// 0 at s = 1 and exactly -inf for s in {1.01, 1.5, 2}; restoring the second
/// singular value with [[1/2,0],[0,delta]] gives the closed form
/// log 2 + log(1/2) + (s - 1) log delta at s = 1.5, which walks to -inf as
/// delta shrinks. Demonstrates the discontinuity on the rank-dropping locus.
ScanReport discontinuity_demo();

}  // namespace plab
