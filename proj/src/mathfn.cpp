#include "scenecal/mathfn.hpp"

#include <cmath>

namespace scenecal {
namespace {

// Rational Chebyshev coefficients for erf/erfc (W. J. Cody, Math. Comp. 23,
// 1969; netlib specfun "calerf"). Three intervals: |x| <= 0.46875 evaluates
// erf directly, the other two evaluate erfc with the split-exponential trick
// that keeps exp(-x*x) accurate.
constexpr double kErfNum[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                               3.77485237685302021e02, 3.20937758913846947e03,
                               1.85777706184603153e-1};
constexpr double kErfDen[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                               1.28261652607737228e03, 2.84423683343917062e03};

constexpr double kErfcNum[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                                6.61191906371416295e01, 2.98635138197400131e02,
                                8.81952221241769090e02, 1.71204761263407058e03,
                                2.05107837782607147e03, 1.23033935479799725e03,
                                2.15311535474403846e-8};
constexpr double kErfcDen[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                                5.37181101862009858e02, 1.62138957456669019e03,
                                3.29079923573345963e03, 4.36261909014324716e03,
                                3.43936767414372164e03, 1.23033935480374942e03};

constexpr double kTailNum[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                1.25781726111229246e-1, 1.60837851487422766e-2,
                                6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kTailDen[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                                5.27905102951428412e-1, 6.05183413124413191e-2,
                                2.33520497626869185e-3};

constexpr double kInvSqrtPi = 5.6418958354775628695e-1;
constexpr double kErfcUnderflow = 26.543;  // erfc underflows to 0 beyond this

// erf on [0, 0.46875].
double erf_small(double x) {
  const double z = x * x;
  double num = kErfNum[4] * z;
  double den = z;
  for (int i = 0; i < 3; ++i) {
    num = (num + kErfNum[i]) * z;
    den = (den + kErfDen[i]) * z;
  }
  return x * (num + kErfNum[3]) / (den + kErfDen[3]);
}

// exp(-y*y) evaluated as exp(-q*q)*exp(-(y-q)(y+q)) with q = trunc(16y)/16,
// which avoids the cancellation in forming y*y directly.
double exp_neg_square(double y) {
  const double q = std::trunc(16.0 * y) / 16.0;
  const double del = (y - q) * (y + q);
  return std::exp(-q * q) * std::exp(-del);
}

// erfc on (0.46875, 4].
double erfc_mid(double y) {
  double num = kErfcNum[8] * y;
  double den = y;
  for (int i = 0; i < 7; ++i) {
    num = (num + kErfcNum[i]) * y;
    den = (den + kErfcDen[i]) * y;
  }
  return exp_neg_square(y) * (num + kErfcNum[7]) / (den + kErfcDen[7]);
}

// erfc on (4, inf).
double erfc_tail(double y) {
  if (y > kErfcUnderflow) return 0.0;
  const double z = 1.0 / (y * y);
  double num = kTailNum[5] * z;
  double den = z;
  for (int i = 0; i < 4; ++i) {
    num = (num + kTailNum[i]) * z;
    den = (den + kTailDen[i]) * z;
  }
  double r = z * (num + kTailNum[4]) / (den + kTailDen[4]);
  return exp_neg_square(y) * (kInvSqrtPi - r) / y;
}

double erfc_positive(double y) { return y <= 4.0 ? erfc_mid(y) : erfc_tail(y); }

}  // namespace

double erf_portable(double x) {
  if (std::isnan(x)) return x;
  const double y = std::fabs(x);
  if (y <= 0.46875) return erf_small(x);
  const double r = 1.0 - erfc_positive(y);
  return x < 0.0 ? -r : r;
}

double erfc_portable(double x) {
  if (std::isnan(x)) return x;
  const double y = std::fabs(x);
  if (y <= 0.46875) return 1.0 - erf_small(x);
  const double r = erfc_positive(y);
  return x < 0.0 ? 2.0 - r : r;
}

}  // namespace scenecal
