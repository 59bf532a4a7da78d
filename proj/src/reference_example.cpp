#include "mmot/reference_example.hpp"

#include <cstdlib>

#include "mmot/errors.hpp"

namespace mmot {

namespace {

// Verbatim decimal strings; parsed once at first use.
constexpr const char* kCoordinates[3][3][2] = {
    {{"0.4417", "-4.7665"}, {"-0.27748", "1.0397"}, {"1.4826", "4.7896"}},
    {{"-2.1054", "-3.9784"}, {"3.5763", "-1.8988"}, {"3.328", "-1.558"}},
    {{"-3.6728", "0.23451"}, {"1.6988", "-2.2917"}, {"-1.1644", "-2.386"}},
};

double parse_coordinate(const char* text) {
  char* end = nullptr;
  const double value = std::strtod(text, &end);
  if (!end || *end != '\0') throw ParseError("reference example: bad embedded coordinate");
  return value;
}

}  // namespace

Instance reference_example() {
  Instance instance;
  instance.marginals.resize(3);
  for (int i = 0; i < 3; ++i) {
    instance.marginals[i].points.resize(3);
    for (int k = 0; k < 3; ++k) {
      instance.marginals[i].points[k] = {parse_coordinate(kCoordinates[i][k][0]),
                                         parse_coordinate(kCoordinates[i][k][1])};
    }
  }
  return validate(instance);
}

const ReferenceExpected& reference_expected() {
  static const ReferenceExpected expected = [] {
    ReferenceExpected e;
    e.lp_value = 68.027;
    e.mmc = 68.065;
    e.gap_percent = 0.0550252189662177;
    e.support_weight = 1.0 / 6.0;
    e.lp_support = {{0, 0, 2}, {0, 1, 1}, {1, 0, 0}, {1, 1, 2}, {2, 2, 0}, {2, 2, 1}};
    e.mmc_support = {{0, 0, 2}, {1, 1, 1}, {2, 2, 0}};
    e.mmc_sigmas = {{0, 1, 2}, {2, 1, 0}};
    e.value_tolerance = 1e-3;
    return e;
  }();
  return expected;
}

}  // namespace mmot
