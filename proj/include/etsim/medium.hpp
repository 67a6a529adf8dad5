#pragma once

namespace etsim {

/// One dispersive propagation arm, k(w0 + e) = k0 + alpha*e + beta*e^2.
struct DispersiveMedium {
  double alpha = 0.0;   // inverse group velocity (time per length)
  double beta = 0.0;    // dispersion (time^2 per length)
  double length = 0.0;

  DispersiveMedium() = default;
  DispersiveMedium(double alpha, double beta, double length);

  bool is_identity() const { return length == 0.0; }

  /// Accumulated phase (sign*alpha*e + beta*e^2) * L. sign = -1 is the
  /// mirrored branch used when e is the partner photon's offset.
  double phase(double offset, int sign = +1) const {
    return (sign * alpha * offset + beta * offset * offset) * length;
  }
};

}  // namespace etsim
