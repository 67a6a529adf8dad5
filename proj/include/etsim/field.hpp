#pragma once

#include <complex>
#include <span>
#include <vector>

#include "etsim/grid.hpp"
#include "etsim/medium.hpp"

namespace etsim {

using Complex = std::complex<double>;

enum class Domain { frequency, time };

const char* to_string(Domain d);

/// Sampled complex field on a FrequencyGrid, tagged with its domain.
/// Immutable once built; every operation returns a new field.
class ComplexField {
 public:
  ComplexField(FrequencyGrid grid, std::vector<Complex> values, Domain domain);

  static ComplexField zeros(const FrequencyGrid& grid, Domain domain);

  const FrequencyGrid& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Frequency offset (frequency domain) or time (time domain) of bin k.
  double coordinate(std::size_t k) const;
  /// Bin width: frequency spacing or time spacing.
  double bin_width() const;

  /// Sum of |v|^2 times the bin width.
  double power() const;
  std::vector<double> intensity() const;

  /// Hands the sample buffer over, leaving the field empty.
  std::vector<Complex> release() && { return std::move(values_); }

 private:
  FrequencyGrid grid_;
  std::vector<Complex> values_;
  Domain domain_;
};

/// Unitary inverse transform, E(t) = (2 pi)^-1/2 * integral F(e) exp(-i e t) de.
ComplexField to_time_domain(const ComplexField& f);

/// Unitary forward transform, inverse of to_time_domain.
ComplexField to_freq_domain(const ComplexField& f);

/// Multiplies each bin by exp(i * m.phase(e, sign)), e measured from the grid
/// centre. A zero-length medium returns the input unchanged.
ComplexField apply_spectral_phase(const ComplexField& f, const DispersiveMedium& m, int sign = +1);

/// Time-domain field after propagating through m. Identity media skip the
/// spectral round trip, so the result is bit-identical to the input.
ComplexField propagate(const ComplexField& time_field, const DispersiveMedium& m);

/// Throws AliasingError when the amplitude in the outer 1/64 of the grid
/// (both ends, at least one bin each) exceeds rel_threshold of the peak.
void check_edges(std::span<const Complex> values, double rel_threshold, const char* what);
void check_edges(const ComplexField& f, double rel_threshold = 1e-6);

}  // namespace etsim
