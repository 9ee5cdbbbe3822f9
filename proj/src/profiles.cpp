#include "heatbeam/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include "heatbeam/errors.hpp"

namespace heatbeam {

Shape zero_shape() {
  return [](double) { return 0.0; };
}

Shape sine_shape(int k) {
  return [k](double s) { return std::sin(k * std::numbers::pi * s); };
}

Shape gaussian_shape(double center, double width) {
  if (!(width > 0)) throw InvalidRun("gaussian width must be positive");
  return [center, width](double s) {
    const double r = (s - center) / width;
    return std::exp(-0.5 * r * r);
  };
}

Shape TabulatedProfile::column(int k) const {
  const auto& ys = columns.at(k);
  const auto& xs = s;
  return [xs, ys](double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1 - t) * ys[i - 1] + t * ys[i];
  };
}

TabulatedProfile read_tabulated(std::istream& is) {
  TabulatedProfile table;
  table.columns.assign(5, {});
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::vector<double> values;
    double v;
    while (row >> v) values.push_back(v);
    if (!row.eof()) {
      throw ParseError("tabulated profile line " + std::to_string(lineno) +
                       ": not a number");
    }
    if (values.empty()) continue;
    if (values.size() != 6) {
      throw ParseError("tabulated profile line " + std::to_string(lineno) +
                       ": expected 6 columns (s z u1 u2 w1 w2)");
    }
    if (!table.s.empty() && !(values[0] > table.s.back())) {
      throw ParseError("tabulated profile line " + std::to_string(lineno) +
                       ": s must increase");
    }
    table.s.push_back(values[0]);
    for (int k = 0; k < 5; ++k) table.columns[k].push_back(values[k + 1]);
  }
  if (table.s.size() < 2) throw ParseError("tabulated profile needs >= 2 rows");
  return table;
}

namespace {

std::function<double(double)> scaled(const Shape& shape, double amplitude,
                                     double length) {
  return [shape, amplitude, length](double x) {
    return amplitude * shape(x / length);
  };
}

std::function<double(double)>* slot(InitialProfiles& prof,
                                    const std::string& name) {
  if (name == "z") return &prof.z;
  if (name == "u1") return &prof.u1;
  if (name == "u2") return &prof.u2;
  if (name == "w1") return &prof.w1;
  if (name == "w2") return &prof.w2;
  return nullptr;
}

}  // namespace

InitialProfiles make_profiles(const Shape& shape, double amplitude,
                              const std::vector<std::string>& fields,
                              double l1, double l2) {
  InitialProfiles prof;
  for (const auto& f : fields) {
    auto* target = slot(prof, f);
    if (!target) throw UnknownKey("initial field '" + f + "'");
    *target = scaled(shape, amplitude, f == "z" ? l1 : l2);
  }
  return prof;
}

InitialProfiles make_profiles(const TabulatedProfile& table, double amplitude,
                              double l1, double l2) {
  InitialProfiles prof;
  for (int k = 0; k < 5; ++k) {
    *slot(prof, kFieldNames[k]) =
        scaled(table.column(k), amplitude, k == 0 ? l1 : l2);
  }
  return prof;
}

}  // namespace heatbeam
