#pragma once
// Values produced once by ml_series_oracle.hpp (260-bit arithmetic) and
// frozen here. test_oracles.cpp recomputes them.

namespace fracbd::frozen {

struct HalfPoint {
  double x;      // argument is -x
  double value;  // E_{1/2}(-x) = e^{x^2} erfc(x)
};

inline constexpr HalfPoint kHalf[] = {
    {0.1, 0.89645697996912665},  {1.0, 0.427583576155807},
    {2.0, 0.25539567631050575},  {5.0, 0.11070463773306863},
    {10.0, 0.056140992743822588}, {20.0, 0.028174348741051319},
};

struct GeneralPoint {
  int num;
  int den;
  double x;
  double value;  // E_{num/den}(x)
};

inline constexpr GeneralPoint kGeneral[] = {
    {3, 10, -0.5, 0.63264900594359907},  {3, 10, -2.0, 0.29023222616787536},
    {7, 10, -0.5, 0.60514759205956425},  {7, 10, -3.0, 0.13789710966502708},
    {7, 10, -12.0, 0.029761168325449353}, {9, 10, -1.0, 0.37606602142464191},
    {9, 10, -8.0, 0.01709514458079681},  {9, 10, -30.0, 0.003713707698459853},
    {7, 10, -40.0, 0.0085261702309107432},
};

}  // namespace fracbd::frozen
