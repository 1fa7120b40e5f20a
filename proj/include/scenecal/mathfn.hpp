#pragma once

namespace scenecal {

/// Error function evaluated from a fixed rational approximation (Cody's
/// three-interval scheme) instead of the platform libm, so seeded results
/// are bit-identical across standard libraries. Exact zero at x = 0;
/// absolute error below 1e-15 on the real line.
double erf_portable(double x);

/// Complementary error function from the same approximation.
double erfc_portable(double x);

}  // namespace scenecal
