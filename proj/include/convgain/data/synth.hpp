#pragma once

#include <cstdint>
#include <vector>

#include "convgain/data/dataset.hpp"

namespace convgain::data {

struct TrackPoint {
  double time_fraction = 0.0;  // position along the time axis, 0 = first step, 1 = last
  double latitude = 0.0;
  double longitude = 0.0;

  bool operator==(const TrackPoint&) const = default;
};

/// Parameters of a synthetic storm. The coastline runs along longitude at
/// latitude `shore_latitude + shore_wiggle * sin(...)`; nodes are denser near
/// it, inland nodes get increasing elevation and offshore nodes negative bed
/// elevation.
struct SynthConfig {
  Index time_steps = 50;
  Index nodes = 250;
  double time_step_hours = 1.0;

  // node sampler
  double longitude_min = -97.0;
  double longitude_max = -94.5;
  double shore_latitude = 29.0;
  double shore_wiggle = 0.08;     // degrees
  double inland_extent = 0.45;    // degrees north of the shore
  double offshore_extent = 0.35;  // degrees south of the shore
  double inland_fraction = 0.6;
  double inland_slope = 0.05;     // meters per km inland
  double offshore_slope = 0.08;   // meters of depth per km offshore
  double terrain_roughness = 0.3; // amplitude of the seeded elevation ripple, meters

  // storm
  std::vector<TrackPoint> track{{0.0, 27.6, -95.2}, {0.6, 29.0, -95.9}, {1.0, 30.0, -96.4}};
  double peak_amplitude = 3.0;       // meters
  double decay_length = 45.0;        // km
  double pulse_width = 0.18;         // fraction of the time axis
  double pulse_center = 0.6;         // fraction of the time axis
  double negative_amplitude = 0.8;   // meters of drawdown
  double negative_offset = 60.0;     // km, trough displacement to the left of the track
  double noise_level = 0.02;         // meters, std of iid Gaussian noise

  std::uint64_t seed = 1;

  void validate() const;
};

/// Storm centre at fractional time `tau` (piecewise-linear in the track).
TrackPoint track_position(const SynthConfig& cfg, double tau);

/// Noise-free surge at node coordinates (lat, lon) and time index t:
/// envelope(t) * (A * exp(-d^2 / 2L^2) - B * exp(-d_trough^2 / 2L^2)).
double surge_pulse(const SynthConfig& cfg, double latitude, double longitude, Index t);

/// Deterministic per seed; the result is fully observed.
SurgeDataset synthesize_surge(const SynthConfig& cfg);

/// A different storm over the same kind of coast: the track is shifted along
/// the shore and the amplitude, size and timing are jittered, all drawn from
/// `seed`, which also becomes the variant's own seed.
SynthConfig storm_variant(const SynthConfig& base, std::uint64_t seed);

/// Great-circle-free flat-earth distance in km, adequate at these scales.
double flat_distance_km(double lat1, double lon1, double lat2, double lon2);

}  // namespace convgain::data
