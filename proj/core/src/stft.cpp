#include "rbeam/stft.hpp"

#include <cmath>
#include <complex>

namespace rbeam {

void StftConfig::validate() const {
  if (window_size < 2 || hop < 1 || hop > window_size) {
    throw ConfigError("StftConfig: invalid window/hop combination");
  }
  if (bin_index < 0 || bin_index >= window_size) {
    throw BinOutOfRange("StftConfig: bin index outside [0, window_size)");
  }
  if (segment_frames < 1) {
    throw ConfigError("StftConfig: segment_frames must be >= 1");
  }
}

Eigen::VectorXd hann_window(int length) {
  // Periodic form: w[n] + w[n + length/2] == 1, so 50% overlap tiles to one.
  Eigen::VectorXd w(length);
  for (int n = 0; n < length; ++n) {
    w(n) = 0.5 * (1.0 - std::cos(2.0 * M_PI * n / length));
  }
  return w;
}

StftFrames stft_bin(const Eigen::MatrixXd& signals, int window_size, int hop,
                    int bin_index) {
  if (signals.rows() < 1) throw EmptyInput("stft_bin: no channels");
  if (window_size < 2 || hop < 1) {
    throw InvalidArgument("stft_bin: invalid window or hop");
  }
  if (bin_index < 0 || bin_index >= window_size) {
    throw BinOutOfRange("stft_bin: bin index outside [0, window_size)");
  }
  const int n = static_cast<int>(signals.cols());
  if (n < window_size) {
    throw InvalidArgument("stft_bin: signal shorter than one window");
  }
  const int m = static_cast<int>(signals.rows());
  const int frames = (n - window_size) / hop + 1;

  // Windowed complex exponential for the one bin of interest; two real dot
  // products per frame and channel beat a full transform here.
  const Eigen::VectorXd w = hann_window(window_size);
  Eigen::VectorXd kernel_re(window_size);
  Eigen::VectorXd kernel_im(window_size);
  for (int t = 0; t < window_size; ++t) {
    const double phase = -2.0 * M_PI * bin_index * t / window_size;
    kernel_re(t) = w(t) * std::cos(phase);
    kernel_im(t) = w(t) * std::sin(phase);
  }

  StftFrames out;
  out.frames.resize(m, frames);
  out.bin_index = bin_index;
  out.window_size = window_size;
  out.hop = hop;
  for (int l = 0; l < frames; ++l) {
    const auto block = signals.middleCols(l * hop, window_size);
    for (int c = 0; c < m; ++c) {
      out.frames(c, l) = std::complex<double>(block.row(c).dot(kernel_re),
                                              block.row(c).dot(kernel_im));
    }
  }
  return out;
}

Eigen::VectorXcd windowed_dft_frame(const Eigen::VectorXd& frame) {
  const int n = static_cast<int>(frame.size());
  if (n < 2) throw InvalidArgument("windowed_dft_frame: frame too short");
  const Eigen::VectorXd w = hann_window(n);
  const Eigen::VectorXd x = w.cwiseProduct(frame);
  Eigen::VectorXcd out(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (int t = 0; t < n; ++t) {
      acc += x(t) * std::polar(1.0, -2.0 * M_PI * k * t / n);
    }
    out(k) = acc;
  }
  return out;
}

SegmentedCorrelations segment_correlations(const StftFrames& frames,
                                           int segment_frames, double loading,
                                           bool auto_loading) {
  const int m = frames.channels();
  if (m < 1 || frames.count() < 1) {
    throw EmptyInput("segment_correlations: no frames");
  }
  if (segment_frames < m) {
    throw SegmentTooShort(
        "segment_correlations: segment_frames below channel count");
  }
  if (loading < 0.0) {
    throw InvalidArgument("segment_correlations: loading must be nonnegative");
  }
  const int n_segments = frames.count() / segment_frames;
  if (n_segments < 1) {
    throw EmptyInput("segment_correlations: fewer frames than one segment");
  }

  SegmentedCorrelations out;
  out.segment_frames = segment_frames;
  out.segments.reserve(n_segments);
  const double inv = 1.0 / static_cast<double>(segment_frames);
  for (int i = 0; i < n_segments; ++i) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(m, m);
    for (int l = 0; l < segment_frames; ++l) {
      const auto z = frames.frames.col(i * segment_frames + l);
      acc.noalias() += z * z.adjoint();
    }
    acc *= inv;
    double total_loading = loading;
    if (auto_loading) {
      total_loading += 1e-10 * acc.real().trace() / m;
    }
    out.segments.emplace_back(0.5 * (acc + acc.adjoint()), total_loading);
  }
  return out;
}

}  // namespace rbeam
