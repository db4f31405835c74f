#include "qbb/linkmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "qbb/geometry.hpp"

namespace qbb::linkmodel {

void OpticalParams::validate() const {
  if (!(aperture_radius > 0.0)) throw std::invalid_argument("optics: aperture_radius must be positive");
  if (!(beam_waist > 0.0)) throw std::invalid_argument("optics: beam_waist must be positive");
  if (!(wavelength > 0.0)) throw std::invalid_argument("optics: wavelength must be positive");
  if (!(eta_zenith > 0.0 && eta_zenith <= 1.0)) throw std::invalid_argument("optics: eta_zenith outside (0, 1]");
  if (!(source_rate > 0.0)) throw std::invalid_argument("optics: source_rate must be positive");
  if (!(rate_floor > 0.0)) throw std::invalid_argument("optics: rate_floor must be positive");
}

double rayleigh_range(const OpticalParams& p) { return kPi * p.beam_waist * p.beam_waist / p.wavelength; }

double beam_radius(double distance, const OpticalParams& p) {
  const double x = distance / rayleigh_range(p);
  return p.beam_waist * std::sqrt(1.0 + x * x);
}

double eta_geo(double distance, const OpticalParams& p) {
  const double w = beam_radius(distance, p);
  return -std::expm1(-2.0 * p.aperture_radius * p.aperture_radius / (w * w));
}

double eta_atm(double zenith, const OpticalParams& p) {
  if (!(zenith >= 0.0 && zenith < 0.5 * kPi)) throw std::domain_error("eta_atm: zenith outside [0, pi/2)");
  return std::pow(p.eta_zenith, 1.0 / std::cos(zenith));
}

double downlink_efficiency(double distance, double zenith, const OpticalParams& p) {
  return eta_geo(distance, p) * eta_atm(zenith, p);
}

PairRate pair_rate(double eta_i, double eta_j, const OpticalParams& p) {
  PairRate out;
  out.rate = p.source_rate * (eta_i * eta_j);
  out.feasible = out.rate >= p.rate_floor;
  return out;
}

}  // namespace qbb::linkmodel
