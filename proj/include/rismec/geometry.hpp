#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rismec/params.hpp"
#include "rismec/rng.hpp"

namespace rismec {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Top-view node layout: AP at the origin, RIS on the positive x-axis,
// device cluster centered on the AP-RIS axis.
struct Geometry {
  Vec2 ap_position;
  Vec2 ris_position;
  std::vector<Vec2> device_positions;
};

// ref_loss * max(distance, 0.1 m)^(-exponent)
inline double path_loss(double dist, double exponent, double ref_loss) {
  if (!(exponent > 0.0)) throw std::invalid_argument("path_loss: exponent must be > 0");
  if (dist < kMinDistanceM) dist = kMinDistanceM;
  return ref_loss * std::pow(dist, -exponent);
}

// Devices are placed uniformly in the disc of radius r_cluster about the
// cluster center at (d, 0). Rejects geometries placing a device on top of
// the RIS.
inline Geometry place_nodes(const SystemParams& params, RngStream& rng) {
  params.validate();
  if (params.d < 0.0) throw std::invalid_argument("place_nodes: d must be >= 0");

  Geometry geom;
  geom.ap_position = {0.0, 0.0};
  geom.ris_position = {params.R, 0.0};
  geom.device_positions.reserve(static_cast<std::size_t>(params.K));

  const Vec2 center{params.d, 0.0};
  for (int k = 0; k < params.K; ++k) {
    const double rad = params.r_cluster * std::sqrt(rng.uniform());
    const double ang = 2.0 * RngStream::kPi * rng.uniform();
    Vec2 pos{center.x + rad * std::cos(ang), center.y + rad * std::sin(ang)};
    if (distance(pos, geom.ris_position) < kMinDistanceM) {
      throw std::invalid_argument("place_nodes: degenerate geometry, device within 0.1 m of the RIS");
    }
    geom.device_positions.push_back(pos);
  }
  return geom;
}

}  // namespace rismec
