#pragma once

#include <span>
#include <vector>

namespace mirkit::ml {

struct GmmComponent {
  double weight = 1.0;
  std::vector<double> mean;
  std::vector<double> covariance;  // diagonal
};

/// Diagonal-covariance Gaussian mixture.
class GmmModel {
 public:
  GmmModel() = default;
  /// Throws ShapeMismatch / InvalidParameter when weights do not sum to one,
  /// variances are not strictly positive, or dimensions disagree.
  explicit GmmModel(std::vector<GmmComponent> components);

  const std::vector<GmmComponent>& components() const noexcept { return components_; }
  std::size_t dimension() const noexcept { return components_.empty() ? 0 : components_[0].mean.size(); }

 private:
  std::vector<GmmComponent> components_;
};

/// log sum_k w_k N(x; mu_k, diag sigma_k), evaluated with log-sum-exp.
double gmm_log_likelihood(const GmmModel& model, std::span<const double> x);

}  // namespace mirkit::ml
