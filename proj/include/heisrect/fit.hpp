#pragma once

#include <vector>

namespace heisrect {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

// Least-squares line through (x_i, y_i).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares slope of log(y) against log(x); pairs with non-positive
// entries are skipped.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> logspace(double lo, double hi, int count);

}  // namespace heisrect
