#pragma once

// Composite Gauss-Legendre rules on panels graded towards the ends of
// [-pi/2, pi/2].

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <vector>

namespace zoll {

/// Breakpoints of [-pi/2, pi/2], symmetric about 0, halving the panel width
/// towards each end until it drops below `feature_width` / 4.
inline std::vector<double> graded_breakpoints(double feature_width) {
  constexpr double half_pi = boost::math::constants::half_pi<double>();
  std::vector<double> right{0.0};
  double gap = half_pi;
  while (gap > feature_width / 4 && right.size() < 60) {
    gap /= 2;
    right.push_back(half_pi - gap);
  }
  right.push_back(half_pi);
  std::vector<double> out;
  for (auto it = right.rbegin(); it != right.rend(); ++it) {
    if (*it != 0.0) out.push_back(-*it);
  }
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

/// 64-point Gauss-Legendre on every panel of `breaks`.
template <class F>
double composite_gauss64(F&& f, const std::vector<double>& breaks) {
  using Rule = boost::math::quadrature::gauss<double, 64>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) total += Rule::integrate(f, breaks[i], breaks[i + 1]);
  return total;
}

}  // namespace zoll
