#include "orthowalk/uniformity.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

namespace orthowalk {
namespace {

std::map<Point3, double> proportions(const std::map<Point3, BigInt>& exact) {
  BigInt total = 0;
  for (const auto& [p, c] : exact) total += c;
  std::map<Point3, double> out;
  if (total == 0) return out;
  const double denom = total.convert_to<double>();
  for (const auto& [p, c] : exact) {
    if (c != 0) out[p] = c.convert_to<double>() / denom;
  }
  return out;
}

}  // namespace

EndpointTally tally_endpoints(const std::vector<Walk3D>& walks) {
  EndpointTally tally;
  for (const auto& w : walks) ++tally[w.endpoint()];
  return tally;
}

double endpoint_rmse(const std::map<Point3, double>& empirical, const std::map<Point3, BigInt>& exact) {
  const auto expected = proportions(exact);
  for (const auto& [p, f] : empirical) {
    if (f != 0.0 && !expected.contains(p)) {
      throw Error(ErrorCode::ImpossibleEndpoint, "sampled an endpoint with zero exact count");
    }
  }
  if (expected.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [p, q] : expected) {
    const auto it = empirical.find(p);
    const double f = it == empirical.end() ? 0.0 : it->second;
    sum += (f - q) * (f - q);
  }
  return std::sqrt(sum / static_cast<double>(expected.size()));
}

double endpoint_rmse(const EndpointTally& tally, const std::map<Point3, BigInt>& exact) {
  std::uint64_t n = 0;
  for (const auto& [p, c] : tally) n += c;
  std::map<Point3, double> empirical;
  for (const auto& [p, c] : tally) {
    empirical[p] = n == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(n);
  }
  return endpoint_rmse(empirical, exact);
}

ChiSquareResult chi_square_endpoints(const EndpointTally& tally, const std::map<Point3, BigInt>& exact) {
  const auto expected = proportions(exact);
  std::uint64_t n = 0;
  for (const auto& [p, c] : tally) {
    if (c != 0 && !expected.contains(p)) {
      throw Error(ErrorCode::ImpossibleEndpoint, "sampled an endpoint with zero exact count");
    }
    n += c;
  }
  ChiSquareResult out;
  if (n == 0) return out;
  const double total = static_cast<double>(n);
  double pooled_expected = 0.0;
  double pooled_observed = 0.0;
  for (const auto& [p, q] : expected) {
    const double e = q * total;
    const auto it = tally.find(p);
    const double o = it == tally.end() ? 0.0 : static_cast<double>(it->second);
    if (e < 5.0) {
      pooled_expected += e;
      pooled_observed += o;
      continue;
    }
    out.statistic += (o - e) * (o - e) / e;
    ++out.cells;
  }
  if (pooled_expected > 0.0) {
    out.statistic += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++out.cells;
  }
  out.dof = out.cells - 1;
  if (out.dof <= 0) {
    out.p_value = 1.0;
    return out;
  }
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

double expected_rmse(const std::map<Point3, BigInt>& exact, std::uint64_t samples) {
  const auto expected = proportions(exact);
  if (expected.empty() || samples == 0) return 0.0;
  double sum = 0.0;
  for (const auto& [p, q] : expected) sum += q * (1.0 - q);
  return std::sqrt(sum / (static_cast<double>(samples) * static_cast<double>(expected.size())));
}

}  // namespace orthowalk
