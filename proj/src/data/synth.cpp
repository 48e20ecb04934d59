#include "convgain/data/synth.hpp"

#include <algorithm>
#include <cmath>

#include "convgain/random.hpp"

namespace convgain::data {

namespace {

constexpr double kKmPerDegreeLat = 110.574;
constexpr double kKmPerDegreeLonEquator = 111.320;

double time_fraction(const SynthConfig& cfg, Index t) {
  if (cfg.time_steps <= 1) return 0.0;
  return static_cast<double>(t) / static_cast<double>(cfg.time_steps - 1);
}

double shore_latitude_at(const SynthConfig& cfg, double longitude) {
  const double span = cfg.longitude_max - cfg.longitude_min;
  const double phase = 3.0 * M_PI * (longitude - cfg.longitude_min) / span;
  return cfg.shore_latitude + cfg.shore_wiggle * std::sin(phase);
}

}  // namespace

void SynthConfig::validate() const {
  require(time_steps >= 1 && nodes >= 1, "synth: time steps and nodes must be >= 1");
  require(time_step_hours > 0.0, "synth: time step must be > 0");
  require(longitude_max > longitude_min, "synth: empty longitude range");
  require(inland_extent > 0.0 && offshore_extent > 0.0, "synth: node extents must be > 0");
  require(inland_fraction >= 0.0 && inland_fraction <= 1.0, "synth: inland fraction in [0, 1]");
  require(!track.empty(), "synth: storm track needs at least one waypoint");
  for (std::size_t i = 1; i < track.size(); ++i) {
    require(track[i].time_fraction > track[i - 1].time_fraction,
            "synth: track waypoints must be ordered in time");
  }
  require(peak_amplitude >= 0.0, "synth: peak amplitude must be >= 0");
  require(noise_level >= 0.0, "synth: noise level must be >= 0");
  require(decay_length > 0.0 && pulse_width > 0.0, "synth: decay length and pulse width must be > 0");
}

double flat_distance_km(double lat1, double lon1, double lat2, double lon2) {
  const double mean_lat = 0.5 * (lat1 + lat2) * M_PI / 180.0;
  const double dx = (lon2 - lon1) * kKmPerDegreeLonEquator * std::cos(mean_lat);
  const double dy = (lat2 - lat1) * kKmPerDegreeLat;
  return std::hypot(dx, dy);
}

TrackPoint track_position(const SynthConfig& cfg, double tau) {
  const auto& tr = cfg.track;
  if (tau <= tr.front().time_fraction) return {tau, tr.front().latitude, tr.front().longitude};
  if (tau >= tr.back().time_fraction) return {tau, tr.back().latitude, tr.back().longitude};
  for (std::size_t i = 1; i < tr.size(); ++i) {
    if (tau <= tr[i].time_fraction) {
      const double w = (tau - tr[i - 1].time_fraction) / (tr[i].time_fraction - tr[i - 1].time_fraction);
      return {tau, tr[i - 1].latitude + w * (tr[i].latitude - tr[i - 1].latitude),
              tr[i - 1].longitude + w * (tr[i].longitude - tr[i - 1].longitude)};
    }
  }
  return {tau, tr.back().latitude, tr.back().longitude};
}

double surge_pulse(const SynthConfig& cfg, double latitude, double longitude, Index t) {
  const double tau = time_fraction(cfg, t);
  const double envelope =
      std::exp(-std::pow(tau - cfg.pulse_center, 2) / (2.0 * cfg.pulse_width * cfg.pulse_width));
  const TrackPoint centre = track_position(cfg, tau);

  // Heading from a small central difference along the track; the trough sits
  // to its left (where water is pushed away from the coast).
  const TrackPoint ahead = track_position(cfg, std::min(1.0, tau + 1e-3));
  const TrackPoint behind = track_position(cfg, std::max(0.0, tau - 1e-3));
  const double cos_lat = std::cos(centre.latitude * M_PI / 180.0);
  double hx = (ahead.longitude - behind.longitude) * kKmPerDegreeLonEquator * cos_lat;
  double hy = (ahead.latitude - behind.latitude) * kKmPerDegreeLat;
  const double norm = std::hypot(hx, hy);
  if (norm > 0.0) {
    hx /= norm;
    hy /= norm;
  } else {
    hx = 0.0;
    hy = 1.0;
  }
  const double trough_lat = centre.latitude + hx * cfg.negative_offset / kKmPerDegreeLat;
  const double trough_lon =
      centre.longitude - hy * cfg.negative_offset / (kKmPerDegreeLonEquator * cos_lat);

  const double two_l2 = 2.0 * cfg.decay_length * cfg.decay_length;
  const double d = flat_distance_km(latitude, longitude, centre.latitude, centre.longitude);
  const double dt = flat_distance_km(latitude, longitude, trough_lat, trough_lon);
  return envelope * (cfg.peak_amplitude * std::exp(-d * d / two_l2) -
                     cfg.negative_amplitude * std::exp(-dt * dt / two_l2));
}

SynthConfig storm_variant(const SynthConfig& base, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  SynthConfig cfg = base;
  const double shift = rng.uniform(-0.6, 0.6);
  const double skew = rng.uniform(-0.3, 0.3);
  for (auto& p : cfg.track) {
    p.longitude += shift + skew * p.time_fraction;
  }
  cfg.peak_amplitude *= rng.uniform(0.7, 1.3);
  cfg.negative_amplitude *= rng.uniform(0.7, 1.3);
  cfg.decay_length *= rng.uniform(0.8, 1.2);
  cfg.pulse_center = std::clamp(cfg.pulse_center + rng.uniform(-0.1, 0.1), 0.0, 1.0);
  cfg.seed = seed;
  return cfg;
}

SurgeDataset synthesize_surge(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  const double ripple_phase_a = rng.uniform(0.0, 2.0 * M_PI);
  const double ripple_phase_b = rng.uniform(0.0, 2.0 * M_PI);
  const double ripple_freq_a = rng.uniform(6.0, 12.0);
  const double ripple_freq_b = rng.uniform(6.0, 12.0);

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(cfg.nodes));
  for (Index i = 0; i < cfg.nodes; ++i) {
    Node n;
    n.id = i + 1;
    n.longitude = rng.uniform(cfg.longitude_min, cfg.longitude_max);
    const bool inland = rng.bernoulli(cfg.inland_fraction);
    const double u = rng.uniform();
    const double shore = shore_latitude_at(cfg, n.longitude);
    if (inland) {
      const double offset = u * u * cfg.inland_extent;
      n.latitude = shore + offset;
      const double ripple = std::sin(ripple_freq_a * n.longitude + ripple_phase_a) *
                            std::cos(ripple_freq_b * n.latitude + ripple_phase_b);
      n.elevation = cfg.inland_slope * offset * kKmPerDegreeLat + cfg.terrain_roughness * ripple;
    } else {
      const double offset = u * u * cfg.offshore_extent;
      n.latitude = shore - offset;
      n.elevation = -(0.3 + cfg.offshore_slope * offset * kKmPerDegreeLat);
    }
    nodes.push_back(n);
  }

  Matrix surge(cfg.time_steps, cfg.nodes);
  for (Index t = 0; t < cfg.time_steps; ++t) {
    for (Index s = 0; s < cfg.nodes; ++s) {
      const Node& n = nodes[static_cast<std::size_t>(s)];
      surge(t, s) = surge_pulse(cfg, n.latitude, n.longitude, t);
    }
  }
  if (cfg.noise_level > 0.0) {
    for (Index t = 0; t < cfg.time_steps; ++t) {
      for (Index s = 0; s < cfg.nodes; ++s) surge(t, s) += cfg.noise_level * rng.normal();
    }
  }
  return make_dataset(std::move(nodes), std::move(surge), 0.0, cfg.time_step_hours);
}

}  // namespace convgain::data
