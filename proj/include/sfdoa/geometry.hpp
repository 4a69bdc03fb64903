#pragma once

// Planar sensor arrays and their far-field steering vectors.

#include <cstdint>
#include <string>
#include <vector>

#include "sfdoa/numkit.hpp"

namespace sfdoa {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Sensor positions of a planar array, stored relative to the reference point
/// and normalized by the wavelength. Immutable after construction.
class ArrayGeometry {
 public:
  /// Positions and reference in meters; throws ArgumentError unless the array
  /// has at least one sensor, wavelength > 0, and every coordinate is finite.
  ArrayGeometry(std::vector<Point2> positions_m, double wavelength_m, Point2 reference_m = {});

  /// Positions already divided by the wavelength, reference at the origin.
  static ArrayGeometry from_normalized(std::vector<Point2> positions_over_lambda);

  std::size_t size() const { return radius_.size(); }
  double wavelength() const { return wavelength_; }

  /// Sensor position relative to the reference, in wavelengths.
  Point2 normalized_position(std::size_t m) const { return normalized_[m]; }
  /// |p_m| / lambda.
  double normalized_radius(std::size_t m) const { return radius_[m]; }
  /// Polar angle of p_m in radians; 0 for a sensor on the reference point.
  double polar_angle(std::size_t m) const { return angle_[m]; }
  double max_normalized_radius() const;

 private:
  ArrayGeometry() = default;
  void finalize();

  std::vector<Point2> normalized_;
  std::vector<double> radius_;
  std::vector<double> angle_;
  double wavelength_ = 1.0;
};

struct SteeringVector {
  double theta = 0.0;
  ComplexVector values;
};

/// a_m(theta) = exp(-j 2 pi (|p_m|/lambda) cos(theta - angle(p_m))).
SteeringVector steering(const ArrayGeometry& geom, double theta);

/// M x L matrix whose columns are steering vectors at the given angles.
ComplexMatrix steering_matrix(const ArrayGeometry& geom, const std::vector<double>& thetas);

/// Uniform circular array: sensor m at polar angle 2 pi m / M, reference at the
/// center.
ArrayGeometry make_uca(std::size_t sensors, double radius_over_lambda);

/// Random planar array inside a disk. The first sensor sits on the boundary so
/// the farthest sensor is exactly max_radius_over_lambda from the origin; the
/// rest are drawn uniformly in the disk by rejection, keeping every pair at
/// least min_spacing_over_lambda apart. Throws GenerationError when 10^6
/// draws do not complete the packing.
ArrayGeometry make_rpa(std::size_t sensors, double min_spacing_over_lambda,
                       double max_radius_over_lambda, std::uint64_t seed);

enum class ReferenceMode { Centroid, Origin };

/// Reads `x_over_lambda,y_over_lambda` rows. The reference defaults to the
/// centroid of the sensors. Throws IoError / ConfigError.
ArrayGeometry load_geometry_csv(const std::string& path, ReferenceMode mode = ReferenceMode::Centroid);

/// Writes the normalized positions (relative to the reference).
void save_geometry_csv(const std::string& path, const ArrayGeometry& geom);

}  // namespace sfdoa
