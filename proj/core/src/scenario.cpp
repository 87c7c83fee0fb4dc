#include "rbeam/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "rbeam/errors.hpp"

namespace rbeam {

namespace {

bool inside_room(const Eigen::Vector3d& p, const Eigen::Vector3d& dims) {
  return (p.array() > 0.0).all() && (p.array() < dims.array()).all();
}

Eigen::Vector3d vec3_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string(what) + " must be a 3-element array");
  }
  return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(),
                         j[2].get<double>());
}

}  // namespace

double SourceSpec::duty_cycle() const {
  if (activation.empty()) {
    return 0.0;
  }
  const auto active = std::count(activation.begin(), activation.end(), true);
  return static_cast<double>(active) / static_cast<double>(activation.size());
}

int Scenario::segments() const {
  return sources.empty() ? 0 : static_cast<int>(sources.front().activation.size());
}

double Scenario::desired_power() const {
  for (const SourceSpec& s : sources) {
    if (s.kind == SourceKind::Desired) {
      return s.power;
    }
  }
  throw ConfigError("scenario has no desired source");
}

double Scenario::noise_power() const {
  return desired_power() * std::pow(10.0, -snr_db / 10.0);
}

void Scenario::validate() const {
  if (!(room.dimensions.array() > 0.0).all()) {
    throw ConfigError("room dimensions must be positive");
  }
  if (room.t60 < 0.0 || !std::isfinite(room.t60)) {
    throw ConfigError("t60 must be nonnegative");
  }
  if (room.air_length < 1) {
    throw ConfigError("air_length must be at least 1 sample");
  }
  if (!(room.fs > 0.0)) {
    throw ConfigError("sampling rate must be positive");
  }
  array.validate();
  for (int m = 0; m < array.size(); ++m) {
    if (!inside_room(array.positions.col(m), room.dimensions)) {
      throw PositionOutsideRoom("microphone " + std::to_string(m) +
                                " outside the room");
    }
  }
  if (sources.empty()) {
    throw ConfigError("scenario needs at least one source");
  }
  if (segment_samples < 1) {
    throw ConfigError("segment_samples must be positive");
  }
  const size_t n_segments = sources.front().activation.size();
  bool has_desired = false;
  for (size_t j = 0; j < sources.size(); ++j) {
    const SourceSpec& s = sources[j];
    const std::string label = "source " + std::to_string(j);
    if (!(s.power > 0.0) || !std::isfinite(s.power)) {
      throw ConfigError(label + " power must be positive");
    }
    if (!inside_room(s.position, room.dimensions)) {
      throw PositionOutsideRoom(label + " outside the room");
    }
    if (s.activation.empty()) {
      throw ConfigError(label + " has an empty activation schedule");
    }
    if (s.activation.size() != n_segments) {
      throw ConfigError("sources disagree on the number of segments");
    }
    if (s.activation_offset < 0.0 || s.activation_offset >= 1.0) {
      throw ConfigError(label + " activation offset must lie in [0, 1)");
    }
    if (s.kind == SourceKind::Desired) {
      has_desired = true;
      if (std::find(s.activation.begin(), s.activation.end(), false) !=
          s.activation.end()) {
        throw ConfigError(label +
                          " is desired and must be active in every segment");
      }
    }
  }
  if (!has_desired) {
    throw ConfigError("scenario needs at least one desired source");
  }
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  try {
    const nlohmann::json& room = j.at("room");
    sc.room.dimensions = vec3_from_json(room.at("dimensions"), "room.dimensions");
    sc.room.t60 = room.value("t60", 0.0);
    sc.room.air_length = room.value("air_length", 2048);
    sc.room.fs = room.value("fs", 16000.0);

    const nlohmann::json& arr = j.at("array");
    if (arr.contains("positions")) {
      const nlohmann::json& pos = arr.at("positions");
      if (!pos.is_array() || pos.empty()) {
        throw ConfigError("array.positions must be a nonempty array");
      }
      sc.array.positions.resize(3, static_cast<Eigen::Index>(pos.size()));
      for (size_t m = 0; m < pos.size(); ++m) {
        sc.array.positions.col(static_cast<Eigen::Index>(m)) =
            vec3_from_json(pos[m], "array position");
      }
    } else {
      const int mics = arr.at("mics").get<int>();
      const double spacing = arr.at("spacing").get<double>();
      Eigen::Vector3d first = Eigen::Vector3d::Zero();
      if (arr.contains("first")) {
        first = vec3_from_json(arr.at("first"), "array.first");
      }
      sc.array = ArrayGeometry::ula(mics, spacing, first);
    }
    sc.array.reference_index = arr.value("reference_index", 0);

    for (const nlohmann::json& src : j.at("sources")) {
      SourceSpec spec;
      spec.position = vec3_from_json(src.at("position"), "source position");
      const std::string kind = src.at("kind").get<std::string>();
      if (kind == "desired") {
        spec.kind = SourceKind::Desired;
      } else if (kind == "interference") {
        spec.kind = SourceKind::Interference;
      } else {
        throw ConfigError("unknown source kind '" + kind + "'");
      }
      spec.power = src.at("power").get<double>();
      for (const nlohmann::json& a : src.at("activation")) {
        spec.activation.push_back(a.get<bool>());
      }
      spec.activation_offset = src.value("activation_offset", 0.0);
      sc.sources.push_back(std::move(spec));
    }

    sc.snr_db = j.at("snr_db").get<double>();
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.segment_samples = j.value("segment_samples", 8192);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad scenario config: ") + e.what());
  }
  sc.validate();
  return sc;
}

nlohmann::json scenario_to_json(const Scenario& sc) {
  nlohmann::json j;
  j["room"]["dimensions"] = {sc.room.dimensions.x(), sc.room.dimensions.y(),
                             sc.room.dimensions.z()};
  j["room"]["t60"] = sc.room.t60;
  j["room"]["air_length"] = sc.room.air_length;
  j["room"]["fs"] = sc.room.fs;
  nlohmann::json positions = nlohmann::json::array();
  for (int m = 0; m < sc.array.size(); ++m) {
    const Eigen::Vector3d p = sc.array.positions.col(m);
    positions.push_back({p.x(), p.y(), p.z()});
  }
  j["array"]["positions"] = positions;
  j["array"]["reference_index"] = sc.array.reference_index;
  j["sources"] = nlohmann::json::array();
  for (const SourceSpec& s : sc.sources) {
    nlohmann::json src;
    src["position"] = {s.position.x(), s.position.y(), s.position.z()};
    src["kind"] = s.kind == SourceKind::Desired ? "desired" : "interference";
    src["power"] = s.power;
    src["activation"] = s.activation;
    src["activation_offset"] = s.activation_offset;
    j["sources"].push_back(std::move(src));
  }
  j["snr_db"] = sc.snr_db;
  j["seed"] = sc.seed;
  j["segment_samples"] = sc.segment_samples;
  return j;
}

}  // namespace rbeam
