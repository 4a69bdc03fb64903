#include "sfdoa/geometry.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sfdoa/csv.hpp"
#include "sfdoa/error.hpp"

namespace sfdoa {

ArrayGeometry::ArrayGeometry(std::vector<Point2> positions_m, double wavelength_m, Point2 reference_m) {
  if (positions_m.empty()) throw ArgumentError("ArrayGeometry: at least one sensor is required");
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw ArgumentError("ArrayGeometry: wavelength must be positive and finite");
  }
  wavelength_ = wavelength_m;
  normalized_.reserve(positions_m.size());
  for (const auto& p : positions_m) {
    normalized_.push_back({(p.x - reference_m.x) / wavelength_m, (p.y - reference_m.y) / wavelength_m});
  }
  finalize();
}

ArrayGeometry ArrayGeometry::from_normalized(std::vector<Point2> positions_over_lambda) {
  return ArrayGeometry(std::move(positions_over_lambda), 1.0);
}

void ArrayGeometry::finalize() {
  radius_.resize(normalized_.size());
  angle_.resize(normalized_.size());
  for (std::size_t m = 0; m < normalized_.size(); ++m) {
    const auto& p = normalized_[m];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ArgumentError("ArrayGeometry: sensor " + std::to_string(m) + " has a non-finite coordinate");
    }
    radius_[m] = std::hypot(p.x, p.y);
    angle_[m] = radius_[m] == 0.0 ? 0.0 : std::atan2(p.y, p.x);
  }
}

double ArrayGeometry::max_normalized_radius() const {
  double r = 0.0;
  for (double v : radius_) r = std::max(r, v);
  return r;
}

SteeringVector steering(const ArrayGeometry& geom, double theta) {
  SteeringVector sv{theta, ComplexVector(static_cast<Eigen::Index>(geom.size()))};
  for (std::size_t m = 0; m < geom.size(); ++m) {
    const double phase = -2.0 * kPi * geom.normalized_radius(m) * std::cos(theta - geom.polar_angle(m));
    sv.values(static_cast<Eigen::Index>(m)) = std::polar(1.0, phase);
  }
  return sv;
}

ComplexMatrix steering_matrix(const ArrayGeometry& geom, const std::vector<double>& thetas) {
  ComplexMatrix a(static_cast<Eigen::Index>(geom.size()), static_cast<Eigen::Index>(thetas.size()));
  for (std::size_t l = 0; l < thetas.size(); ++l) {
    a.col(static_cast<Eigen::Index>(l)) = steering(geom, thetas[l]).values;
  }
  return a;
}

ArrayGeometry make_uca(std::size_t sensors, double radius_over_lambda) {
  if (sensors < 2) throw ArgumentError("make_uca: at least two sensors are required");
  if (!(radius_over_lambda > 0.0)) throw ArgumentError("make_uca: radius must be positive");
  std::vector<Point2> pos(sensors);
  for (std::size_t m = 0; m < sensors; ++m) {
    const double phi = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(sensors);
    pos[m] = {radius_over_lambda * std::cos(phi), radius_over_lambda * std::sin(phi)};
  }
  return ArrayGeometry::from_normalized(std::move(pos));
}

ArrayGeometry make_rpa(std::size_t sensors, double min_spacing_over_lambda,
                       double max_radius_over_lambda, std::uint64_t seed) {
  if (sensors < 2) throw ArgumentError("make_rpa: at least two sensors are required");
  if (!(max_radius_over_lambda > 0.0) || !(min_spacing_over_lambda >= 0.0)) {
    throw ArgumentError("make_rpa: radius must be positive and spacing nonnegative");
  }
  // Disks of diameter d around each sensor must fit (by area) in a disk of radius R + d/2.
  const double half = 0.5 * min_spacing_over_lambda;
  if (static_cast<double>(sensors) * half * half > std::pow(max_radius_over_lambda + half, 2)) {
    throw GenerationError("make_rpa: packing infeasible for the requested spacing and radius");
  }

  constexpr long kMaxAttempts = 1'000'000;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double d2 = min_spacing_over_lambda * min_spacing_over_lambda;

  std::vector<Point2> pos;
  pos.reserve(sensors);
  const double phi0 = 2.0 * kPi * unit(rng);
  pos.push_back({max_radius_over_lambda * std::cos(phi0), max_radius_over_lambda * std::sin(phi0)});

  long attempts = 0;
  while (pos.size() < sensors) {
    if (++attempts > kMaxAttempts) {
      std::ostringstream os;
      os << "make_rpa: placed only " << pos.size() << " of " << sensors << " sensors after "
         << kMaxAttempts << " attempts";
      throw GenerationError(os.str());
    }
    const double r = max_radius_over_lambda * std::sqrt(unit(rng));
    const double phi = 2.0 * kPi * unit(rng);
    const Point2 cand{r * std::cos(phi), r * std::sin(phi)};
    bool ok = true;
    for (const auto& p : pos) {
      const double dx = p.x - cand.x;
      const double dy = p.y - cand.y;
      if (dx * dx + dy * dy < d2) {
        ok = false;
        break;
      }
    }
    if (ok) pos.push_back(cand);
  }
  return ArrayGeometry::from_normalized(std::move(pos));
}

ArrayGeometry load_geometry_csv(const std::string& path, ReferenceMode mode) {
  const auto table = csv::read_file(path);
  if (table.header != std::vector<std::string>{"x_over_lambda", "y_over_lambda"}) {
    throw ConfigError("geometry file '" + path + "' must start with header x_over_lambda,y_over_lambda");
  }
  std::vector<Point2> pos;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    Point2 p;
    if (row.size() != 2 || !csv::parse_double(row[0], p.x) || !csv::parse_double(row[1], p.y)) {
      throw ConfigError("geometry file '" + path + "': malformed row at line " +
                        std::to_string(table.line_numbers[i]));
    }
    pos.push_back(p);
  }
  if (pos.empty()) throw ConfigError("geometry file '" + path + "' has no sensors");
  Point2 ref;
  if (mode == ReferenceMode::Centroid) {
    for (const auto& p : pos) {
      ref.x += p.x;
      ref.y += p.y;
    }
    ref.x /= static_cast<double>(pos.size());
    ref.y /= static_cast<double>(pos.size());
  }
  return ArrayGeometry(std::move(pos), 1.0, ref);
}

void save_geometry_csv(const std::string& path, const ArrayGeometry& geom) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file '" + path + "'", path);
  out << "x_over_lambda,y_over_lambda\n";
  for (std::size_t m = 0; m < geom.size(); ++m) {
    const auto p = geom.normalized_position(m);
    out << csv::format_double(p.x) << ',' << csv::format_double(p.y) << '\n';
  }
}

}  // namespace sfdoa
