#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rbeam/hpd.hpp"

namespace rbeam {

// STFT analysis parameters plus the single bin the pipeline operates on.
struct StftConfig {
  int window_size = 1024;
  int hop = 512;
  int bin_index = 250;
  int segment_frames = 16;  // L_w, frames per correlation segment

  void validate() const;
};

// One selected DFT bin across frames: column l holds the length-M snapshot
// z(l) of frame l.
struct StftFrames {
  Eigen::MatrixXcd frames;  // M x L
  int bin_index = 0;
  int window_size = 0;
  int hop = 0;

  int channels() const { return static_cast<int>(frames.rows()); }
  int count() const { return static_cast<int>(frames.cols()); }
};

// Hann-windowed single-bin DFT of multichannel time signals (rows = channels).
StftFrames stft_bin(const Eigen::MatrixXd& signals, int window_size, int hop,
                    int bin_index);

// Full Hann-windowed DFT of one frame of one channel; used by energy checks.
Eigen::VectorXcd windowed_dft_frame(const Eigen::VectorXd& frame);

// Periodic Hann window of the given length.
Eigen::VectorXd hann_window(int length);

struct SegmentedCorrelations {
  std::vector<HpdMatrix> segments;
  int segment_frames = 0;
};

// Per-segment sample correlation matrices (1/L_w) sum z z^H over consecutive
// blocks of segment_frames frames; the trailing partial block is dropped.
// `loading` adds an absolute diagonal term; `auto_loading` additionally adds
// 1e-10 * trace/M per segment to guard rank-deficient blocks.
SegmentedCorrelations segment_correlations(const StftFrames& frames,
                                           int segment_frames,
                                           double loading = 0.0,
                                           bool auto_loading = false);

}  // namespace rbeam
