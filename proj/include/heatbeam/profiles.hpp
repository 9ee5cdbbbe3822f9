#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "heatbeam/semidiscrete.hpp"

namespace heatbeam {

/// Shape on the normalized coordinate s in [0, 1].
using Shape = std::function<double(double)>;

Shape zero_shape();
/// sin(k pi s).
Shape sine_shape(int k);
/// exp(-((s - center) / width)^2 / 2).
Shape gaussian_shape(double center, double width);

/// Samples on s in [0, 1]; columns s z u1 u2 w1 w2, one row per line,
/// '#' comments allowed. Linear interpolation between rows.
struct TabulatedProfile {
  std::vector<double> s;
  std::vector<std::vector<double>> columns;  // z u1 u2 w1 w2

  Shape column(int k) const;
};

TabulatedProfile read_tabulated(std::istream& is);

inline constexpr const char* kFieldNames[] = {"z", "u1", "u2", "w1", "w2"};

/// Applies amplitude * shape to every listed field ("z", "u1", "u2", "w1",
/// "w2"); the rod is scaled by l1 and the beam by l2.
InitialProfiles make_profiles(const Shape& shape, double amplitude,
                              const std::vector<std::string>& fields,
                              double l1, double l2);

InitialProfiles make_profiles(const TabulatedProfile& table, double amplitude,
                              double l1, double l2);

}  // namespace heatbeam
