#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ecmnoise/constants.hpp"

namespace ecmnoise {

enum class Tolerance {
  Relative,         // |computed - expected| <= tol * |expected|
  Absolute,         // |computed - expected| <= tol
  SignificantDigits,  // computed rounded to `tol` significant digits equals expected
};

struct RegressionCheck {
  std::string name;
  double expected;
  double computed;
  double tolerance;
  Tolerance kind;

  bool passed() const;
};

/// Published reference numbers of the front-end noise analysis recomputed
/// from the library. `k` is exposed so that a perturbed constant set can
/// demonstrate that the checks are sensitive to it.
std::vector<RegressionCheck> run_self_test(const PhysicalConstants& k = kCodata);

/// Prints a fixed-width table; returns true when every check passed.
bool print_self_test(const std::vector<RegressionCheck>& checks, std::ostream& out);

}  // namespace ecmnoise
