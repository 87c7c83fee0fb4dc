#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rbeam/array.hpp"

namespace rbeam {

enum class SourceKind { Desired, Interference };

// One point source emitting white Gaussian noise of the given variance,
// gated by a per-segment activation schedule. activation_offset shifts the
// gating boundaries by that fraction of a segment (used to misalign source
// activity against the analysis segmentation); sources are otherwise gated
// exactly at segment boundaries, so a source active in any part of a
// segment is active for all of it.
struct SourceSpec {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  SourceKind kind = SourceKind::Interference;
  double power = 1.0;
  std::vector<bool> activation;
  double activation_offset = 0.0;

  double duty_cycle() const;
};

// Shoebox room. t60 = 0 selects the anechoic direct path.
struct RoomSpec {
  Eigen::Vector3d dimensions = Eigen::Vector3d(5.0, 4.0, 3.5);
  double t60 = 0.0;
  int air_length = 2048;
  double fs = 16000.0;
};

// Complete synthesis description. segment_samples is the time-domain span
// of one analysis segment and anchors the activation gating; snr_db relates
// the first desired source's emitted power to the sensor noise power,
// sigma_v^2 = sigma_0^2 * 10^(-snr_db/10).
struct Scenario {
  RoomSpec room;
  ArrayGeometry array;
  std::vector<SourceSpec> sources;
  double snr_db = 50.0;
  std::uint64_t seed = 0;
  int segment_samples = 8192;

  int segments() const;
  double desired_power() const;
  double noise_power() const;
  void validate() const;
};

// Parsers for the on-disk scenario schema (shared by the JSON and TOML
// loaders; TOML files are lowered to the same JSON shape first).
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& sc);

}  // namespace rbeam
