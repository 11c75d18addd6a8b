// measure.cpp — probability measure construction and affine operations.

#include "mmdist/measure.hpp"

#include <cmath>
#include <sstream>

#include "mmdist/errors.hpp"
#include "mmdist/simd.hpp"

namespace mmd {

namespace {

// Mixture arithmetic can produce weights like -3e-17; anything beyond this
// magnitude is treated as genuinely negative input.
constexpr double kNegativeClamp = -1e-14;

}  // namespace

ProbabilityMeasure::ProbabilityMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw InvalidInput("measure needs a metric space");
  if (weights_.size() != static_cast<std::size_t>(space_->size())) {
    std::ostringstream msg;
    msg << "weight vector has " << weights_.size() << " entries for a space of "
        << space_->size() << " points";
    throw InvalidInput(msg.str());
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w)) {
      std::ostringstream msg;
      msg << "weight " << i << " is not finite";
      throw InvalidInput(msg.str());
    }
    if (w < kNegativeClamp) {
      std::ostringstream msg;
      msg << "weight " << i << " is negative (" << w << ")";
      throw InvalidInput(msg.str());
    }
    if (w < 0.0) weights_[i] = 0.0;
  }
  const double total =
      simd::active_kernels().sum(weights_.data(), weights_.size());
  if (!(total > 0.0)) throw InvalidInput("total mass must be positive");
  if (total != 1.0) {
    for (double& w : weights_) w /= total;
  }
}

std::vector<int> ProbabilityMeasure::support() const {
  std::vector<int> result;
  for (int i = 0; i < size(); ++i) {
    if (weights_[static_cast<std::size_t>(i)] > 0.0) result.push_back(i);
  }
  return result;
}

double ProbabilityMeasure::max_weight_diff(const ProbabilityMeasure& other) const {
  if (weights_.size() != other.weights_.size()) {
    throw InvalidInput("weight vectors have different lengths");
  }
  return simd::active_kernels().max_abs_diff(weights_.data(), other.weights_.data(),
                                             weights_.size());
}

ProbabilityMeasure dirac(SpacePtr space, int i) {
  if (!space) throw InvalidInput("measure needs a metric space");
  if (i < 0 || i >= space->size()) {
    std::ostringstream msg;
    msg << "point index " << i << " out of range [0," << space->size() << ")";
    throw InvalidInput(msg.str());
  }
  std::vector<double> w(static_cast<std::size_t>(space->size()), 0.0);
  w[static_cast<std::size_t>(i)] = 1.0;
  return ProbabilityMeasure(std::move(space), std::move(w));
}

ProbabilityMeasure mixture(const std::vector<double>& coeffs,
                           const std::vector<ProbabilityMeasure>& measures) {
  if (coeffs.empty() || coeffs.size() != measures.size()) {
    throw InvalidInput("mixture needs matching, nonempty coefficient and measure lists");
  }
  double coeff_total = 0.0;
  for (double c : coeffs) {
    if (!(c >= 0.0) || c > 1.0) {
      std::ostringstream msg;
      msg << "mixture coefficient " << c << " outside [0,1]";
      throw InvalidInput(msg.str());
    }
    coeff_total += c;
  }
  if (std::abs(coeff_total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "mixture coefficients sum to " << coeff_total << ", expected 1";
    throw InvalidInput(msg.str());
  }
  const SpacePtr& space = measures.front().space();
  for (const auto& m : measures) {
    if (!m.space()->same_metric_as(*space)) {
      throw InvalidInput("mixture components live on different spaces");
    }
  }
  std::vector<double> w(static_cast<std::size_t>(space->size()), 0.0);
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    const auto& mw = measures[t].weights();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += coeffs[t] * mw[i];
  }
  return ProbabilityMeasure(space, std::move(w));
}

ProbabilityMeasure pushforward(const std::vector<int>& point_map, SpacePtr target,
                               const ProbabilityMeasure& mu) {
  if (!target) throw InvalidInput("pushforward needs a target space");
  if (point_map.size() != static_cast<std::size_t>(mu.size())) {
    throw InvalidInput("point map length does not match the source space");
  }
  std::vector<double> w(static_cast<std::size_t>(target->size()), 0.0);
  for (std::size_t i = 0; i < point_map.size(); ++i) {
    const int j = point_map[i];
    if (j < 0 || j >= target->size()) {
      std::ostringstream msg;
      msg << "point map sends " << i << " to " << j << ", outside [0," << target->size()
          << ")";
      throw InvalidInput(msg.str());
    }
    w[static_cast<std::size_t>(j)] += mu.weight(static_cast<int>(i));
  }
  return ProbabilityMeasure(std::move(target), std::move(w));
}

ProbabilityMeasure empirical(SpacePtr space, const std::vector<int>& indices,
                             const std::vector<double>& multiplicities) {
  if (!space) throw InvalidInput("measure needs a metric space");
  if (indices.empty()) throw InvalidInput("empirical measure needs at least one sample");
  if (!multiplicities.empty() && multiplicities.size() != indices.size()) {
    throw InvalidInput("multiplicity list length does not match sample list");
  }
  std::vector<double> w(static_cast<std::size_t>(space->size()), 0.0);
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const int i = indices[t];
    if (i < 0 || i >= space->size()) {
      std::ostringstream msg;
      msg << "sample index " << i << " out of range [0," << space->size() << ")";
      throw InvalidInput(msg.str());
    }
    const double m = multiplicities.empty() ? 1.0 : multiplicities[t];
    if (!(m >= 0.0)) throw InvalidInput("multiplicities must be nonnegative");
    w[static_cast<std::size_t>(i)] += m;
  }
  return ProbabilityMeasure(std::move(space), std::move(w));
}

}  // namespace mmd
