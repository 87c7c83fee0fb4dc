#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "rbeam/array.hpp"
#include "rbeam/beamformers.hpp"
#include "rbeam/manifold.hpp"
#include "rbeam/room_sim.hpp"
#include "rbeam/stft.hpp"

namespace rbeam {
namespace {

constexpr double kWavelength = 0.0872;

Eigen::VectorXcd random_direction(std::mt19937_64& eng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd h(dim);
  for (int i = 0; i < dim; ++i) {
    h(i) = std::complex<double>(normal(eng), normal(eng));
  }
  return h * (std::sqrt(static_cast<double>(dim)) / h.norm());
}

// Segment-like family: a shared desired component plus one strong rank-one
// interferer per segment over a small white floor. This is the shape the
// mean solvers see in practice and it keeps the Karcher iteration honest.
std::vector<HpdMatrix> spiked_family(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const Eigen::VectorXcd h0 = random_direction(eng, dim);
  std::vector<HpdMatrix> segments;
  segments.reserve(count);
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXcd hi = random_direction(eng, dim);
    Eigen::MatrixXcd g = h0 * h0.adjoint() + 4.0 * hi * hi.adjoint() +
                         0.01 * Eigen::MatrixXcd::Identity(dim, dim);
    segments.emplace_back(0.5 * (g + g.adjoint()));
  }
  return segments;
}

StftFrames random_frames(int channels, int count, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  StftFrames frames;
  frames.frames.resize(channels, count);
  for (int l = 0; l < count; ++l) {
    for (int m = 0; m < channels; ++m) {
      frames.frames(m, l) = std::complex<double>(normal(eng), normal(eng));
    }
  }
  frames.bin_index = 250;
  frames.window_size = 1024;
  frames.hop = 512;
  return frames;
}

void BM_KarcherMean(benchmark::State& state) {
  const std::vector<HpdMatrix> segments =
      spiked_family(12, static_cast<int>(state.range(0)), 7);
  const MeanConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(karcher_mean(segments, cfg));
  }
}
BENCHMARK(BM_KarcherMean)->Arg(2)->Arg(10);

void BM_LogEuclideanMean(benchmark::State& state) {
  const std::vector<HpdMatrix> segments = spiked_family(12, 10, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_euclidean_mean(segments));
  }
}
BENCHMARK(BM_LogEuclideanMean);

void BM_StreamingRiemannianUpdate(benchmark::State& state) {
  const std::vector<HpdMatrix> segments = spiked_family(12, 2, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        streaming_riemannian_update(segments[0], segments[1], 5));
  }
}
BENCHMARK(BM_StreamingRiemannianUpdate);

void BM_DsPatternScan(benchmark::State& state) {
  const ArrayGeometry geom = ArrayGeometry::ula(12, 0.0436);
  const HpdMatrix gamma = spiked_family(12, 1, 3).front();
  const Eigen::VectorXd thetas = doa_grid(181);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ds_beam_pattern(gamma, geom, thetas, kWavelength));
  }
}
BENCHMARK(BM_DsPatternScan);

void BM_SbspPatternScan(benchmark::State& state) {
  const ArrayGeometry geom = ArrayGeometry::ula(12, 0.0436);
  const HpdMatrix gamma = spiked_family(12, 1, 3).front();
  const Eigen::VectorXd thetas = doa_grid(181);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sbsp_beam_pattern(gamma, geom, thetas, kWavelength, 2));
  }
}
BENCHMARK(BM_SbspPatternScan);

void BM_ImageSourceAir(benchmark::State& state) {
  RoomSpec room;
  room.dimensions = Eigen::Vector3d(5.0, 4.0, 3.5);
  room.t60 = 0.15;
  room.air_length = 2048;
  const Eigen::Vector3d source(2.6, 2.9, 1.8);
  const Eigen::Vector3d mic(2.2, 1.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(image_source_air(room, source, mic));
  }
}
BENCHMARK(BM_ImageSourceAir);

void BM_StftBin(benchmark::State& state) {
  std::mt19937_64 eng(17);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd signals(12, 16896);
  for (Eigen::Index t = 0; t < signals.cols(); ++t) {
    for (Eigen::Index m = 0; m < signals.rows(); ++m) {
      signals(m, t) = normal(eng);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft_bin(signals, 1024, 512, 250));
  }
}
BENCHMARK(BM_StftBin);

void BM_SegmentCorrelations(benchmark::State& state) {
  const StftFrames frames = random_frames(12, 256, 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(segment_correlations(frames, 16, 0.0, true));
  }
}
BENCHMARK(BM_SegmentCorrelations);

}  // namespace
}  // namespace rbeam

BENCHMARK_MAIN();
