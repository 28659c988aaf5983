#include "nlos/coverage.hpp"

#include <cmath>
#include <numbers>

#include "nlos/errors.hpp"

namespace nlos::coverage {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

void require_non_negative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be non-negative and finite");
  }
}

}  // namespace

void GaussianBeam::validate() const {
  require_positive(launch_power, "launch power");
  require_positive(beam_radius, "beam radius");
}

void ReceiverSpec::validate() const {
  require_positive(sensitivity, "receiver sensitivity");
  if (detector_area) require_positive(*detector_area, "detector area");
}

double required_launch_power(double sensitivity, double beam_radius, double r) {
  require_positive(sensitivity, "sensitivity");
  require_positive(beam_radius, "beam radius");
  require_non_negative(r, "cell radius");
  const double w2 = beam_radius * beam_radius;
  return (sensitivity * std::numbers::pi * w2) / (2.0 * std::exp(-2.0 * r * r / w2));
}

double max_cell_radius(double launch_power, double sensitivity) {
  require_non_negative(launch_power, "launch power");
  require_positive(sensitivity, "sensitivity");
  return std::sqrt(launch_power / (sensitivity * std::numbers::pi * std::numbers::e));
}

double irradiance_at(const GaussianBeam& beam, double rho) {
  beam.validate();
  require_non_negative(rho, "radial offset");
  const double w2 = beam.beam_radius * beam.beam_radius;
  return 2.0 * beam.launch_power / (std::numbers::pi * w2) * std::exp(-2.0 * rho * rho / w2);
}

double optimal_beam_radius(double r) {
  require_non_negative(r, "cell radius");
  return r * std::numbers::sqrt2;
}

bool is_connected(const GaussianBeam& beam, const ReceiverSpec& receiver, double rho) {
  return irradiance_at(beam, rho) >= receiver.sensitivity;
}

std::optional<double> received_power(const GaussianBeam& beam, const ReceiverSpec& receiver,
                                     double rho) {
  if (!receiver.detector_area) return std::nullopt;
  return irradiance_at(beam, rho) * *receiver.detector_area;
}

}  // namespace nlos::coverage
