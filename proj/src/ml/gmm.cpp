#include "mirkit/ml/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit::ml {

GmmModel::GmmModel(std::vector<GmmComponent> components) : components_(std::move(components)) {
  require(!components_.empty(), ErrorKind::InvalidParameter, "GMM needs at least one component");
  const std::size_t dim = components_.front().mean.size();
  require(dim > 0, ErrorKind::ShapeMismatch, "GMM mean must not be empty");
  double total = 0.0;
  for (const auto& c : components_) {
    require(c.mean.size() == dim && c.covariance.size() == dim, ErrorKind::ShapeMismatch,
            "GMM components disagree on dimension");
    require(c.weight >= 0.0, ErrorKind::InvalidParameter, "GMM weights must be nonnegative");
    for (double v : c.covariance)
      require(v > 0.0 && std::isfinite(v), ErrorKind::InvalidParameter,
              "GMM variances must be strictly positive");
    total += c.weight;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorKind::InvalidParameter,
          "GMM weights sum to " + std::to_string(total));
}

double gmm_log_likelihood(const GmmModel& model, std::span<const double> x) {
  if (x.size() != model.dimension())
    fail(ErrorKind::DimensionMismatch, "GMM dimension " + std::to_string(model.dimension()) +
                                           ", observation " + std::to_string(x.size()));
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  std::vector<double> terms;
  terms.reserve(model.components().size());
  for (const auto& c : model.components()) {
    if (c.weight == 0.0) continue;
    double acc = std::log(c.weight);
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double diff = x[d] - c.mean[d];
      acc -= 0.5 * (log_2pi + std::log(c.covariance[d]) + diff * diff / c.covariance[d]);
    }
    terms.push_back(acc);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

}  // namespace mirkit::ml
