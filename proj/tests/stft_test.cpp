#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "rbeam/errors.hpp"
#include "rbeam/stft.hpp"

namespace rbeam {
namespace {

Eigen::MatrixXd white_signals(std::mt19937_64& eng, int channels, int samples) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(channels, samples);
  for (int n = 0; n < samples; ++n) {
    for (int c = 0; c < channels; ++c) x(c, n) = normal(eng);
  }
  return x;
}

TEST(StftTest, HannWindowIsPeriodicAndTiles) {
  const int n = 64;
  const Eigen::VectorXd w = hann_window(n);
  EXPECT_DOUBLE_EQ(w(0), 0.0);
  EXPECT_NEAR(w(n / 2), 1.0, 1e-15);
  // Periodic form: 50% overlapped copies sum to one everywhere.
  for (int k = 0; k < n / 2; ++k) {
    EXPECT_NEAR(w(k) + w(k + n / 2), 1.0, 1e-14);
  }
}

TEST(StftTest, WindowedDftSatisfiesParseval) {
  std::mt19937_64 eng(5);
  std::normal_distribution<double> normal;
  const int n = 128;
  Eigen::VectorXd frame(n);
  for (int t = 0; t < n; ++t) frame(t) = normal(eng);
  const Eigen::VectorXcd spectrum = windowed_dft_frame(frame);
  ASSERT_EQ(spectrum.size(), n);
  const Eigen::VectorXd windowed = hann_window(n).cwiseProduct(frame);
  EXPECT_NEAR(spectrum.squaredNorm(), n * windowed.squaredNorm(),
              1e-9 * n * windowed.squaredNorm());
}

TEST(StftTest, PureToneLandsInItsBin) {
  const int n = 256;
  const int hop = 128;
  const int bin = 10;
  const double amplitude = 0.7;
  Eigen::MatrixXd x(1, 4 * n);
  for (int t = 0; t < x.cols(); ++t) {
    x(0, t) = amplitude * std::cos(2.0 * M_PI * bin * t / n);
  }
  const StftFrames frames = stft_bin(x, n, hop, bin);
  // Integer-bin cosine against a periodic Hann: |Z| = A * sum(w) / 2 exactly,
  // and sum(w) = n / 2.
  const double expected = amplitude * n / 4.0;
  for (int l = 0; l < frames.count(); ++l) {
    EXPECT_NEAR(std::abs(frames.frames(0, l)), expected, 1e-9 * expected);
  }
}

TEST(StftTest, FrameCountAndMetadata) {
  std::mt19937_64 eng(6);
  const Eigen::MatrixXd x = white_signals(eng, 3, 1024 + 512 * 5);
  const StftFrames frames = stft_bin(x, 1024, 512, 250);
  EXPECT_EQ(frames.channels(), 3);
  EXPECT_EQ(frames.count(), 6);
  EXPECT_EQ(frames.bin_index, 250);
  EXPECT_EQ(frames.window_size, 1024);
  EXPECT_EQ(frames.hop, 512);
}

TEST(StftTest, RejectsBadArguments) {
  std::mt19937_64 eng(7);
  const Eigen::MatrixXd x = white_signals(eng, 2, 2048);
  EXPECT_THROW(stft_bin(x, 1024, 512, 1024), BinOutOfRange);
  EXPECT_THROW(stft_bin(x, 1024, 512, -1), BinOutOfRange);
  EXPECT_THROW(stft_bin(x, 1024, 0, 100), InvalidArgument);
  EXPECT_THROW(stft_bin(white_signals(eng, 2, 512), 1024, 512, 100),
               InvalidArgument);
}

TEST(StftTest, ConfigValidateRejectsNonsense) {
  StftConfig cfg;
  cfg.hop = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = StftConfig{};
  cfg.bin_index = 2048;
  EXPECT_THROW(cfg.validate(), BinOutOfRange);
  cfg = StftConfig{};
  cfg.segment_frames = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(StftTest, SegmentCorrelationsMatchManualAverage) {
  std::mt19937_64 eng(8);
  std::normal_distribution<double> normal;
  StftFrames frames;
  frames.frames.resize(3, 16);
  for (int l = 0; l < 16; ++l) {
    for (int c = 0; c < 3; ++c) {
      frames.frames(c, l) = std::complex<double>(normal(eng), normal(eng));
    }
  }
  const SegmentedCorrelations segs = segment_correlations(frames, 8, 0.0,
                                                          false);
  ASSERT_EQ(segs.segments.size(), 2u);
  EXPECT_EQ(segs.segment_frames, 8);
  Eigen::MatrixXcd manual = Eigen::MatrixXcd::Zero(3, 3);
  for (int l = 0; l < 8; ++l) {
    manual += frames.frames.col(l) * frames.frames.col(l).adjoint();
  }
  manual /= 8.0;
  EXPECT_LT((segs.segments[0].entries() - manual).norm(),
            1e-12 * manual.norm());
}

TEST(StftTest, TrailingPartialSegmentIsDropped) {
  std::mt19937_64 eng(9);
  const Eigen::MatrixXd x = white_signals(eng, 2, 1024 + 512 * 10);
  const StftFrames frames = stft_bin(x, 1024, 512, 100);
  ASSERT_EQ(frames.count(), 11);
  const SegmentedCorrelations segs = segment_correlations(frames, 4);
  EXPECT_EQ(segs.segments.size(), 2u);
}

TEST(StftTest, AutoLoadingRescuesRankDeficientSegments) {
  StftFrames frames;
  frames.frames.resize(3, 4);
  Eigen::VectorXcd z(3);
  z << 1.0, std::complex<double>(0.0, 2.0), -1.0;
  for (int l = 0; l < 4; ++l) frames.frames.col(l) = z;

  EXPECT_THROW(segment_correlations(frames, 4, 0.0, false),
               NotPositiveDefinite);
  const SegmentedCorrelations segs = segment_correlations(frames, 4, 0.0,
                                                          true);
  ASSERT_EQ(segs.segments.size(), 1u);
  EXPECT_NEAR(segs.segments[0].entries().trace().real(), z.squaredNorm(),
              1e-6);
}

TEST(StftTest, EqualSegmentsAverageToWholeIntervalCorrelation) {
  std::mt19937_64 eng(10);
  std::normal_distribution<double> normal;
  StftFrames frames;
  frames.frames.resize(3, 24);
  for (int l = 0; l < 24; ++l) {
    for (int c = 0; c < 3; ++c) {
      frames.frames(c, l) = std::complex<double>(normal(eng), normal(eng));
    }
  }
  const SegmentedCorrelations segs = segment_correlations(frames, 8, 0.0,
                                                          false);
  ASSERT_EQ(segs.segments.size(), 3u);
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(3, 3);
  for (const auto& s : segs.segments) mean += s.entries();
  mean /= 3.0;
  const SegmentedCorrelations whole = segment_correlations(frames, 24, 0.0,
                                                           false);
  EXPECT_LT((mean - whole.segments[0].entries()).norm(),
            1e-12 * mean.norm());
}

TEST(StftTest, WhiteFramesGiveNearIdentityCorrelation) {
  std::mt19937_64 eng(11);
  std::normal_distribution<double> normal;
  const int m = 4;
  const int lw = 4096;
  StftFrames frames;
  frames.frames.resize(m, lw);
  // Unit-power circular white samples: E z z^H = I.
  const double scale = 1.0 / std::sqrt(2.0);
  for (int l = 0; l < lw; ++l) {
    for (int c = 0; c < m; ++c) {
      frames.frames(c, l) =
          scale * std::complex<double>(normal(eng), normal(eng));
    }
  }
  const SegmentedCorrelations segs = segment_correlations(frames, lw);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
  EXPECT_LT((segs.segments[0].entries() - eye).norm(), 0.1 * eye.norm());
}

TEST(StftTest, SegmentShorterThanChannelsRejected) {
  StftFrames frames;
  frames.frames = Eigen::MatrixXcd::Identity(6, 6);
  EXPECT_THROW(segment_correlations(frames, 4), SegmentTooShort);
}

}  // namespace
}  // namespace rbeam
