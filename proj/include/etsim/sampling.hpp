#pragma once

#include <cstddef>
#include <vector>

#include "etsim/field.hpp"
#include "etsim/random.hpp"

namespace etsim {

/// Ideal photodetection: draws detection times with density proportional to
/// the instantaneous intensity |f(t)|^2. Samples land on bin times.
class IntensitySampler {
 public:
  explicit IntensitySampler(const ComplexField& time_field);

  double draw(RandomStream& rng) const;

 private:
  std::vector<double> cdf_;
  std::vector<double> times_;
};

std::vector<double> sample_from_intensity(const ComplexField& f, std::size_t n, RandomStream& rng);

}  // namespace etsim
