#pragma once

#include <cstdint>
#include <map>

#include "orthowalk/bigint.hpp"
#include "orthowalk/pipeline.hpp"

namespace orthowalk {

using EndpointTally = std::map<Point3, std::uint64_t>;

EndpointTally tally_endpoints(const std::vector<Walk3D>& walks);

/// Root mean square of (empirical frequency - exact proportion) over the
/// endpoints with nonzero exact count. Throws ImpossibleEndpoint if the
/// empirical side puts mass on an endpoint the exact layer rules out.
double endpoint_rmse(const std::map<Point3, double>& empirical,
                     const std::map<Point3, BigInt>& exact);
double endpoint_rmse(const EndpointTally& tally, const std::map<Point3, BigInt>& exact);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells = 0;
};

/// Pearson goodness of fit of the tally against the exact proportions.
/// Cells with expected count below 5 are pooled into one cell.
ChiSquareResult chi_square_endpoints(const EndpointTally& tally, const std::map<Point3, BigInt>& exact);

/// Expected RMSE of a perfect sampler drawing `samples` walks:
/// sqrt(sum p(1-p) / (samples * K)) over the K possible endpoints.
double expected_rmse(const std::map<Point3, BigInt>& exact, std::uint64_t samples);

}  // namespace orthowalk
