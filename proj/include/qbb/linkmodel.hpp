#pragma once

namespace qbb::linkmodel {

/// Optical downlink parameters. Defaults are the study's operating point.
struct OpticalParams {
  double aperture_radius = 0.5;   // m, receiver a_R
  double beam_waist = 0.10;       // m, w0
  double wavelength = 810e-9;     // m
  double eta_zenith = 0.8;        // clear-sky transmission at zenith
  double source_rate = 1e8;       // attempts/s per edge
  double rate_floor = 1.0;        // pairs/s, edges below this are infeasible

  void validate() const;
};

/// Diffraction-limited Gaussian beam radius after propagating `distance` metres.
double beam_radius(double distance, const OpticalParams& p);

double rayleigh_range(const OpticalParams& p);

/// Fraction of a Gaussian beam collected by the circular receiver aperture.
double eta_geo(double distance, const OpticalParams& p);

/// Clear-sky atmospheric transmission eta_zen^sec(z). Throws std::domain_error
/// outside 0 <= zenith < pi/2.
double eta_atm(double zenith, const OpticalParams& p);

/// Single downlink efficiency for a slant range and zenith angle.
double downlink_efficiency(double distance, double zenith, const OpticalParams& p);

struct PairRate {
  double rate = 0.0;  // pairs/s
  bool feasible = false;
};

/// Expected entanglement rate of a pair served by one satellite.
PairRate pair_rate(double eta_i, double eta_j, const OpticalParams& p);

}  // namespace qbb::linkmodel
