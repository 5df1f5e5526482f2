// Shared values for the 3x3 counterexample, derived by hand from the datum.
#pragma once

#include <vector>

namespace fixtures {

// Vertex order v12 v22 v32 v23 v21 v13 v11 v31 v33.
inline const std::vector<double> kDatum{100, 18, 20, 100, 100, 200, 200, 200, 0};
inline constexpr double kTotalVariation = 1048.0;
inline constexpr double kMean = 938.0 / 9.0;
// Least-norm element of dJ(f); its squared norm is 36.
inline const std::vector<double> kMinimalSection{-1, -4, 1, 1, -1, 2, 2, 2, -2};

inline const std::vector<double> kRofAlpha02{100.2, 18.8, 19.8, 99.8, 100.2, 199.6, 199.6, 199.6, 0.4};
inline const std::vector<double> kRofAlpha1{101, 20.5, 20.5, 99, 101, 198, 198, 198, 2};
inline const std::vector<double> kRofAlpha3{103, 24, 23, 97, 103, 194, 194, 194, 6};
inline const std::vector<double> kFlowT1{101, 20.8, 20.2, 99, 101, 198, 198, 198, 2};
inline const std::vector<double> kFlowT3{103, 24.8, 22.2, 97, 103, 194, 194, 194, 6};

}  // namespace fixtures
