#include "etsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "etsim/errors.hpp"
#include "etsim/fft.hpp"

namespace etsim {

const char* to_string(Domain d) { return d == Domain::frequency ? "frequency" : "time"; }

ComplexField::ComplexField(FrequencyGrid grid, std::vector<Complex> values, Domain domain)
    : grid_(grid), values_(std::move(values)), domain_(domain) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("ComplexField: " + std::to_string(values_.size()) +
                          " values for a grid of " + std::to_string(grid_.size()) + " points");
  }
}

ComplexField ComplexField::zeros(const FrequencyGrid& grid, Domain domain) {
  return ComplexField(grid, std::vector<Complex>(grid.size()), domain);
}

double ComplexField::coordinate(std::size_t k) const {
  return domain_ == Domain::frequency ? grid_.offset(k) : grid_.time(k);
}

double ComplexField::bin_width() const {
  return domain_ == Domain::frequency ? grid_.spacing() : grid_.time_spacing();
}

double ComplexField::power() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * bin_width();
}

std::vector<double> ComplexField::intensity() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](Complex v) { return std::norm(v); });
  return out;
}

namespace {

void require_domain(const ComplexField& f, Domain expected, const char* op) {
  if (f.domain() != expected) {
    throw DomainMismatchError(std::string(op) + ": expected a " + to_string(expected) +
                              "-domain field, got " + to_string(f.domain()));
  }
}

}  // namespace

ComplexField to_time_domain(const ComplexField& f) {
  require_domain(f, Domain::frequency, "to_time_domain");
  std::vector<Complex> data(f.values().begin(), f.values().end());
  detail::centered_dft(data, detail::FftSign::minus);
  const double scale = f.grid().spacing() / std::sqrt(2.0 * std::numbers::pi);
  for (auto& v : data) v *= scale;
  return ComplexField(f.grid(), std::move(data), Domain::time);
}

ComplexField to_freq_domain(const ComplexField& f) {
  require_domain(f, Domain::time, "to_freq_domain");
  std::vector<Complex> data(f.values().begin(), f.values().end());
  detail::centered_dft(data, detail::FftSign::plus);
  const double scale = f.grid().time_spacing() / std::sqrt(2.0 * std::numbers::pi);
  for (auto& v : data) v *= scale;
  return ComplexField(f.grid(), std::move(data), Domain::frequency);
}

ComplexField apply_spectral_phase(const ComplexField& f, const DispersiveMedium& m, int sign) {
  require_domain(f, Domain::frequency, "apply_spectral_phase");
  if (sign != 1 && sign != -1) throw InvalidArgument("apply_spectral_phase: sign must be +1 or -1");
  if (m.is_identity()) return f;
  std::vector<Complex> data(f.values().begin(), f.values().end());
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data[k] != Complex{}) data[k] *= std::polar(1.0, m.phase(f.grid().offset(k), sign));
  }
  return ComplexField(f.grid(), std::move(data), Domain::frequency);
}

ComplexField propagate(const ComplexField& time_field, const DispersiveMedium& m) {
  require_domain(time_field, Domain::time, "propagate");
  if (m.is_identity()) return time_field;
  return to_time_domain(apply_spectral_phase(to_freq_domain(time_field), m, +1));
}

void check_edges(std::span<const Complex> values, double rel_threshold, const char* what) {
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  const std::size_t n = values.size();
  const std::size_t band = std::max<std::size_t>(1, n / 64);
  double edge = 0.0;
  for (std::size_t k = 0; k < band; ++k) {
    edge = std::max({edge, std::abs(values[k]), std::abs(values[n - 1 - k])});
  }
  if (edge > rel_threshold * peak) {
    throw AliasingError(std::string(what) + ": edge amplitude " + std::to_string(edge / peak) +
                        " of peak exceeds " + std::to_string(rel_threshold) +
                        "; increase the grid span or the number of points");
  }
}

void check_edges(const ComplexField& f, double rel_threshold) {
  check_edges(f.values(), rel_threshold,
              f.domain() == Domain::frequency ? "frequency grid" : "time window");
}

}  // namespace etsim
