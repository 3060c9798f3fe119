#pragma once

// Data behind the four extension figures: reflection-extended profiles,
// their level profiles F_i and the auxiliary function G.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "zoll/errors.hpp"
#include "zoll/io.hpp"
#include "zoll/multienergy.hpp"
#include "zoll/profiles.hpp"

namespace zoll {

struct FigureFile {
  std::string name;  ///< file stem, e.g. "fig3_left"
  std::string title;
  CsvTable table;
};

namespace figure_setup {

/// Case1, xi = 3/2: odd core plus a free piece on (-3/2, -1).
inline ExtendedProfile case1() {
  DeformationProfile core{odd_bump(0.3, 0.8, 0.1), {-0.8, 0.8}};
  DeformationProfile free_piece{scale(0.05, unit_bump(-1.4, -1.1)), {-1.4, -1.1}};
  return extend_pair(core, ladder_from_strings({"5", "2"}), PairCase::case1, free_piece);
}

/// Case3, xi = 1/2: seed on (-1/2, 0).
inline ExtendedProfile case3() {
  DeformationProfile seed{scale(0.1, unit_bump(-0.45, -0.05)), {-0.45, -0.05}};
  return extend_pair(seed, ladder_from_strings({"15", "10"}), PairCase::case3);
}

/// Three chained reflections of a compactly supported odd core.
inline ExtendedProfile chain() {
  DeformationProfile core{odd_bump(0.2, 0.6, 0.02), {-0.6, 0.6}};
  return extend_chain(core, ladder_from_strings({"8", "4", "2", "1"}));
}

/// gamma = 1/4 with the seed on (0, 1/4).
inline ExtendedProfile rational() {
  DeformationProfile seed{scale(0.1, unit_bump(0.0, 0.25)), {0.0, 0.25}};
  return build_multi_profile(seed, ladder_from_strings({"15", "12", "10"}));
}

}  // namespace figure_setup

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x;
  for (int i = 0; i < n; ++i) x.push_back(i + 1 == n ? b : a + (b - a) * i / (n - 1));
  return x;
}

namespace detail {

inline CsvTable profile_and_G(const ExtendedProfile& ext, int n) {
  CsvTable t{{"x", "f_tilde", "G"}, {}, 12};
  for (double x : linspace(ext.domain.lo, 1.0, n)) t.add({x, value(ext.f_tilde, x), value(ext.G, x)});
  return t;
}

/// y on [-1, 1] against the listed level profiles (0-based levels).
inline CsvTable levels_on_unit(const ExtendedProfile& ext, const std::vector<std::size_t>& levels,
                               const std::vector<std::string>& names, int n) {
  CsvTable t;
  t.header = {"y"};
  t.header.insert(t.header.end(), names.begin(), names.end());
  std::vector<DeformationProfile> F;
  for (auto i : levels) F.push_back(ext.level_profile(i));
  for (double y : linspace(-1.0, 1.0, n)) {
    std::vector<double> row{y};
    for (const auto& p : F) row.push_back(value(p.fn, y));
    t.add(row);
  }
  return t;
}

}  // namespace detail

inline std::vector<FigureFile> figure_data(int which, int samples = 1001) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<FigureFile> out;
  switch (which) {
    case 1: {
      out.push_back({"fig1_left", "Case1, xi = 3/2: f~ and G", detail::profile_and_G(figure_setup::case1(), samples)});
      out.push_back({"fig1_right", "Case3, xi = 1/2: f~ and G", detail::profile_and_G(figure_setup::case3(), samples)});
      break;
    }
    case 2: {
      ExtendedProfile ext = figure_setup::chain();
      out.push_back({"fig2_left", "Chained extensions on [-1, 1]",
                     detail::levels_on_unit(ext, {0, 1, 2, 3}, {"F1", "F2", "F3", "F4"}, samples)});
      double h = ext.ladder.h.back();
      DeformationProfile F = ext.level_profile(3);
      CsvTable t{{"rho", "F4_over"}, {}, 12};
      for (double rho : linspace(0.0, 2.0 / h, samples)) t.add({rho, besse_B_taylor(h, F.fn, rho, 0)[0] - 1.0});
      out.push_back({"fig2_right", "F4(1 - h rho)/(2 - h rho)", t});
      break;
    }
    case 3: {
      ExtendedProfile ext = figure_setup::rational();
      CsvTable t{{"x", "stage1", "stage2", "stage3"}, {}, 12};
      for (double x : linspace(ext.domain.lo, 1.0, samples)) {
        double v = value(ext.f_tilde, x);
        // Each piece keeps its shared endpoint so the plotted stages join up.
        t.add({x, x >= -1.0 ? v : nan, (x <= -1.0 && x >= -1.5) ? v : nan, x <= -1.5 ? v : nan});
      }
      out.push_back({"fig3_left", "f~ per construction stage, gamma = 1/4", t});
      out.push_back({"fig3_right", "F2 and f", detail::levels_on_unit(ext, {1, 0}, {"F2", "f"}, samples)});
      break;
    }
    case 4: {
      ExtendedProfile ext = figure_setup::rational();
      out.push_back({"fig4_left", "F3 and f", detail::levels_on_unit(ext, {2, 0}, {"F3", "f"}, samples)});
      CsvTable t{{"x", "G"}, {}, 12};
      for (double x : linspace(ext.domain.lo, 1.0, samples)) t.add({x, value(ext.G, x)});
      out.push_back({"fig4_right", "G = f~/(1 - x^2)", t});
      break;
    }
    default:
      throw InvalidInput("figure id must be 1, 2, 3 or 4, got " + std::to_string(which));
  }
  return out;
}

}  // namespace zoll
