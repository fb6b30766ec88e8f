#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lgheat {

struct SpectrumLevel {
  double value = 0.0;
  long multiplicity = 1;
  /// Estimated absolute error of value (0 for closed-form spectra).
  double error = 0.0;
};

/// Sorted eigenvalues with multiplicities. Values at or above reliable_below
/// are not trustworthy (basis truncation).
struct Spectrum {
  std::vector<SpectrumLevel> levels;
  bool truncated = true;
  double reliable_below = std::numeric_limits<double>::infinity();

  long count() const {
    long s = 0;
    for (const auto& l : levels) s += l.multiplicity;
    return s;
  }

  /// Eigenvalues with multiplicity expanded, in increasing order.
  std::vector<double> expanded() const {
    std::vector<double> v;
    for (const auto& l : levels) v.insert(v.end(), static_cast<std::size_t>(l.multiplicity), l.value);
    return v;
  }

  double heat_trace(double t) const {
    double s = 0.0;
    for (const auto& l : levels) s += static_cast<double>(l.multiplicity) * std::exp(-t * l.value);
    return s;
  }

  void sort_and_merge(double tol = 0.0) {
    std::sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    std::vector<SpectrumLevel> merged;
    for (const auto& l : levels) {
      if (!merged.empty() && std::abs(merged.back().value - l.value) <= tol) {
        merged.back().multiplicity += l.multiplicity;
        merged.back().error = std::max(merged.back().error, l.error);
      } else {
        merged.push_back(l);
      }
    }
    levels = std::move(merged);
  }
};

}  // namespace lgheat
