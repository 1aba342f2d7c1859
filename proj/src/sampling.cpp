#include "slowent/sampling.hpp"

#include <array>

#include <boost/math/distributions/normal.hpp>

#include "slowent/error.hpp"

namespace slowent {

double radical_inverse(unsigned long index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

Eigen::VectorXd halton_sphere_point(unsigned long index, int k) {
  static constexpr std::array<unsigned, 8> kPrimes{2, 3, 5, 7, 11, 13, 17, 19};
  if (k < 1 || k > static_cast<int>(kPrimes.size())) {
    throw Error(ErrorCode::InvalidArgument, "Halton directions support rank 1..8");
  }
  const boost::math::normal_distribution<double> normal;
  Eigen::VectorXd v(k);
  for (int j = 0; j < k; ++j) {
    const double u = radical_inverse(index, kPrimes[j]);
    if (u <= 0.0 || u >= 1.0) return Eigen::VectorXd::Zero(k);
    v(j) = boost::math::quantile(normal, u);
  }
  const double n = v.norm();
  if (n < 1e-12) return Eigen::VectorXd::Zero(k);
  return v / n;
}

} // namespace slowent
