#include "etsim/sampling.hpp"

#include "etsim/errors.hpp"

namespace etsim {

IntensitySampler::IntensitySampler(const ComplexField& f) {
  if (f.domain() != Domain::time) {
    throw DomainMismatchError("sample_from_intensity: expected a time-domain field");
  }
  const auto values = f.values();
  cdf_.resize(values.size());
  times_.resize(values.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    acc += std::norm(values[j]);
    cdf_[j] = acc;
    times_[j] = f.grid().time(j);
  }
  if (!(acc > 0.0)) throw DegenerateWeightsError("sample_from_intensity: field has zero intensity");
}

double IntensitySampler::draw(RandomStream& rng) const { return times_[rng.from_cdf(cdf_)]; }

std::vector<double> sample_from_intensity(const ComplexField& f, std::size_t n, RandomStream& rng) {
  const IntensitySampler sampler(f);
  std::vector<double> out(n);
  for (auto& t : out) t = sampler.draw(rng);
  return out;
}

}  // namespace etsim
