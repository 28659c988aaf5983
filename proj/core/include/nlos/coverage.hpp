#pragma once

#include <optional>
#include <string>

#include "nlos/geometry.hpp"

// Optical cell dimensioning for a ceiling VCSEL with a Gaussian irradiance
// profile at the floor plane. All quantities are SI: watts, meters, W/m^2.
namespace nlos::coverage {

/// Launch power and floor-plane beam radius of one ceiling transmitter.
struct GaussianBeam {
  double launch_power = 0.0;  ///< P, watts
  double beam_radius = 0.0;   ///< W, meters

  /// Throws DomainError unless both fields are positive and finite.
  void validate() const;
};

struct ReceiverSpec {
  double sensitivity = 0.0;  ///< I_r, minimum irradiance in W/m^2
  std::optional<double> detector_area;  ///< m^2; reporting only

  void validate() const;
};

struct Cell {
  std::string cell_id;
  Point2D center;
  double radius = 0.0;
};

/// Power needed so that irradiance at radius `r` equals `sensitivity`:
/// P = I_r * pi * W^2 / (2 * exp(-2 r^2 / W^2)).
double required_launch_power(double sensitivity, double beam_radius, double r);

/// Largest cell radius reachable with power P when the beam radius is
/// optimal: r = sqrt(P / (I_r * pi * e)).
double max_cell_radius(double launch_power, double sensitivity);

/// Irradiance at radial offset `rho` from the beam axis:
/// I(rho) = 2P / (pi W^2) * exp(-2 rho^2 / W^2).
double irradiance_at(const GaussianBeam& beam, double rho);

/// Beam radius minimising the launch power that covers radius r (W = r*sqrt 2).
double optimal_beam_radius(double r);

/// True iff the irradiance at `rho` reaches the receiver's sensitivity.
/// Equality counts as connected.
bool is_connected(const GaussianBeam& beam, const ReceiverSpec& receiver, double rho);

/// Optical power collected by the detector at `rho`, if an area is configured.
std::optional<double> received_power(const GaussianBeam& beam, const ReceiverSpec& receiver,
                                     double rho);

}  // namespace nlos::coverage
