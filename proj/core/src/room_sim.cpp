#include "rbeam/room_sim.hpp"

#include <algorithm>
#include <cmath>

#include "rbeam/errors.hpp"
#include "rbeam/rng.hpp"

namespace rbeam {

namespace {

// Half-width of the windowed-sinc interpolation kernel: taps cover
// [-kTapsBelow, kTapsAbove] around the fractional arrival time.
constexpr int kTapsBelow = 3;
constexpr int kTapsAbove = 4;

double windowed_sinc(double u) {
  const double window = 0.5 * (1.0 + std::cos(M_PI * u / 4.0));
  if (std::abs(u) < 1e-12) {
    return window;
  }
  return window * std::sin(M_PI * u) / (M_PI * u);
}

// Deposits one arrival at fractional sample time t0 with the given gain.
void add_arrival(Eigen::VectorXd& air, double t0, double gain) {
  const int base = static_cast<int>(std::floor(t0));
  const double frac = t0 - base;
  for (int k = -kTapsBelow; k <= kTapsAbove; ++k) {
    const int idx = base + k;
    if (idx < 0 || idx >= air.size()) {
      continue;
    }
    air(idx) += gain * windowed_sinc(k - frac);
  }
}

void check_inside(const Eigen::Vector3d& p, const Eigen::Vector3d& dims,
                  const char* what) {
  if (!((p.array() > 0.0).all() && (p.array() < dims.array()).all())) {
    throw PositionOutsideRoom(std::string(what) + " outside the room");
  }
}

int activation_index(int sample, int offset_samples, int segment_samples,
                     int n_segments) {
  const int shifted = sample - offset_samples;
  int idx = shifted >= 0 ? shifted / segment_samples
                         : -1 - (-shifted - 1) / segment_samples;
  return std::clamp(idx, 0, n_segments - 1);
}

}  // namespace

Eigen::VectorXd image_source_air(const RoomSpec& room,
                                 const Eigen::Vector3d& source,
                                 const Eigen::Vector3d& mic) {
  check_inside(source, room.dimensions, "source");
  check_inside(mic, room.dimensions, "microphone");
  if ((source - mic).norm() < 1e-3) {
    throw InvalidArgument("source and microphone coincide");
  }

  Eigen::VectorXd air = Eigen::VectorXd::Zero(room.air_length);
  const double samples_per_meter = room.fs / kSpeedOfSound;

  if (room.t60 == 0.0) {
    const double d = (source - mic).norm();
    add_arrival(air, d * samples_per_meter, 1.0 / (4.0 * M_PI * d));
    return air;
  }

  // Uniform wall reflectivity from Sabine's formula.
  const Eigen::Vector3d& dims = room.dimensions;
  const double volume = dims.prod();
  const double surface =
      2.0 * (dims.x() * dims.y() + dims.x() * dims.z() + dims.y() * dims.z());
  const double absorption = 24.0 * std::log(10.0) * volume /
                            (kSpeedOfSound * surface * room.t60);
  if (absorption >= 1.0) {
    throw ConfigError("t60 too short for this room (absorption exceeds 1)");
  }
  const double beta = std::sqrt(1.0 - absorption);

  const int order =
      static_cast<int>(std::ceil(room.t60 * kSpeedOfSound / dims.minCoeff())) +
      3;
  // Arrivals later than the response length cannot land any tap, so the
  // image lattice is clipped to the audible radius per axis.
  const double max_dist =
      (room.air_length + kTapsAbove) / samples_per_meter;
  Eigen::Vector3i range;
  for (int a = 0; a < 3; ++a) {
    const int audible =
        static_cast<int>(std::ceil(max_dist / (2.0 * dims(a)))) + 1;
    range(a) = std::min(order, audible);
  }

  std::vector<double> beta_pow(6 * (order + 1) + 1);
  beta_pow[0] = 1.0;
  for (size_t n = 1; n < beta_pow.size(); ++n) {
    beta_pow[n] = beta_pow[n - 1] * beta;
  }

  for (int rx = -range.x(); rx <= range.x(); ++rx) {
    for (int ry = -range.y(); ry <= range.y(); ++ry) {
      for (int rz = -range.z(); rz <= range.z(); ++rz) {
        for (int p = 0; p < 8; ++p) {
          const int px = p & 1;
          const int py = (p >> 1) & 1;
          const int pz = (p >> 2) & 1;
          const Eigen::Vector3d image(
              (1 - 2 * px) * source.x() + 2.0 * rx * dims.x(),
              (1 - 2 * py) * source.y() + 2.0 * ry * dims.y(),
              (1 - 2 * pz) * source.z() + 2.0 * rz * dims.z());
          const double d = (image - mic).norm();
          const double t0 = d * samples_per_meter;
          if (t0 - kTapsBelow >= air.size()) {
            continue;
          }
          const int reflections = std::abs(rx - px) + std::abs(rx) +
                                  std::abs(ry - py) + std::abs(ry) +
                                  std::abs(rz - pz) + std::abs(rz);
          const double gain =
              beta_pow[reflections] / (4.0 * M_PI * std::max(d, 1e-3));
          add_arrival(air, t0, gain);
        }
      }
    }
  }
  return air;
}

int render_length(const Scenario& sc, double duration_seconds) {
  const int n = static_cast<int>(std::llround(duration_seconds * sc.room.fs));
  const int minimum = sc.segments() * sc.segment_samples;
  if (n < minimum) {
    throw ConfigError("duration shorter than the activation schedule (" +
                      std::to_string(n) + " < " + std::to_string(minimum) +
                      " samples)");
  }
  return n;
}

double duration_for_segments(const Scenario& sc, int segments, int window_size,
                             int hop) {
  if (segments < 1 || window_size < hop || hop < 1) {
    throw InvalidArgument("bad segment arithmetic");
  }
  return (static_cast<double>(segments) * sc.segment_samples + window_size -
          hop) /
         sc.room.fs;
}

Eigen::MatrixXd render_signals(const Scenario& sc, double duration_seconds) {
  return render_signals(sc, duration_seconds,
                        std::vector<bool>(sc.sources.size(), true));
}

Eigen::MatrixXd render_signals(const Scenario& sc, double duration_seconds,
                               const std::vector<bool>& source_mask) {
  sc.validate();
  if (source_mask.size() != sc.sources.size()) {
    throw DimensionMismatch("source mask does not match source count");
  }
  const int n = render_length(sc, duration_seconds);
  const int m = sc.array.size();
  const int n_segments = sc.segments();

  // Channels as contiguous columns while accumulating; transposed on return.
  Eigen::MatrixXd buf = Eigen::MatrixXd::Zero(n, m);

  for (size_t j = 0; j < sc.sources.size(); ++j) {
    if (!source_mask[j]) {
      continue;
    }
    const SourceSpec& src = sc.sources[j];
    GaussianStream stream(derive_seed(sc.seed, 1000 + j));
    const double scale = std::sqrt(src.power);
    const int offset_samples = static_cast<int>(
        std::llround(src.activation_offset * sc.segment_samples));

    Eigen::VectorXd emitted(n);
    for (int t = 0; t < n; ++t) {
      const double sample = scale * stream.next();
      const int seg = activation_index(t, offset_samples, sc.segment_samples,
                                       n_segments);
      emitted(t) = src.activation[seg] ? sample : 0.0;
    }

    for (int mic = 0; mic < m; ++mic) {
      const Eigen::VectorXd air =
          image_source_air(sc.room, src.position, sc.array.positions.col(mic));
      auto channel = buf.col(mic);
      for (int t = 0; t < n; ++t) {
        if (emitted(t) == 0.0) {
          continue;
        }
        const int span = std::min<int>(air.size(), n - t);
        channel.segment(t, span) += emitted(t) * air.head(span);
      }
    }
  }

  GaussianStream noise(derive_seed(sc.seed, 0));
  const double sigma_v = std::sqrt(sc.noise_power());
  for (int mic = 0; mic < m; ++mic) {
    auto channel = buf.col(mic);
    for (int t = 0; t < n; ++t) {
      channel(t) += sigma_v * noise.next();
    }
  }
  return buf.transpose();
}

}  // namespace rbeam
