#ifndef SCHRODER_DENSITY_HPP
#define SCHRODER_DENSITY_HPP

#include <functional>
#include <string>
#include <utility>

#include "schroder/interval.hpp"

namespace schroder {

/// Closed-form normalized density rho(x) = Z * kernel(x) on a domain.
/// Evaluates to 0 outside the domain.
class DensityModel {
 public:
  DensityModel(std::string name, Interval domain, double normalization, std::function<double(double)> kernel)
      : name_(std::move(name)), domain_(domain), z_(normalization), kernel_(std::move(kernel)) {}

  double operator()(double x) const { return domain_.contains_closure(x) ? z_ * kernel_(x) : 0.0; }

  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }
  /// Z such that Z * kernel integrates to one.
  double normalization() const { return z_; }
  double kernel(double x) const { return kernel_(x); }

 private:
  std::string name_;
  Interval domain_;
  double z_;
  std::function<double(double)> kernel_;
};

}  // namespace schroder

#endif  // SCHRODER_DENSITY_HPP
