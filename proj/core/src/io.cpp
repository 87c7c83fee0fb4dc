#include "rbeam/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rbeam/errors.hpp"
#include "rbeam/metrics.hpp"
#include "rbeam/toml_lite.hpp"

namespace rbeam {
namespace {

constexpr double kDegree = M_PI / 180.0;

void append_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void append_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void append_f32(std::string& buf, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  append_u32(buf, bits);
}

std::uint16_t read_u16(const std::string& buf, size_t at) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(buf[at]) |
      (static_cast<unsigned char>(buf[at + 1]) << 8));
}

std::uint32_t read_u32(const std::string& buf, size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(buf[at + i]);
  }
  return v;
}

float read_f32(const std::string& buf, size_t at) {
  const std::uint32_t bits = read_u32(buf, at);
  float v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void write_wav(const std::string& path, const Eigen::MatrixXd& signals,
               int sample_rate) {
  if (signals.rows() < 1 || signals.cols() < 1) {
    throw InvalidArgument("write_wav: empty signal matrix");
  }
  if (sample_rate < 1) throw InvalidArgument("write_wav: bad sample rate");
  const int channels = static_cast<int>(signals.rows());
  const Eigen::Index samples = signals.cols();
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(samples) * channels * 4u;
  const std::uint32_t byte_rate =
      static_cast<std::uint32_t>(sample_rate) * channels * 4u;

  std::string buf;
  buf.reserve(58 + data_size);
  buf.append("RIFF");
  // 4 ("WAVE") + fmt (8 + 18) + fact (8 + 4) + data (8 + data_size).
  append_u32(buf, 4 + 26 + 12 + 8 + data_size);
  buf.append("WAVE");

  buf.append("fmt ");
  append_u32(buf, 18);
  append_u16(buf, 3);  // IEEE float
  append_u16(buf, static_cast<std::uint16_t>(channels));
  append_u32(buf, static_cast<std::uint32_t>(sample_rate));
  append_u32(buf, byte_rate);
  append_u16(buf, static_cast<std::uint16_t>(channels * 4));
  append_u16(buf, 32);
  append_u16(buf, 0);  // no format extension

  buf.append("fact");
  append_u32(buf, 4);
  append_u32(buf, static_cast<std::uint32_t>(samples));

  buf.append("data");
  append_u32(buf, data_size);
  for (Eigen::Index t = 0; t < samples; ++t) {
    for (int c = 0; c < channels; ++c) {
      append_f32(buf, static_cast<float>(signals(c, t)));
    }
  }
  write_text_file(path, buf);
}

Eigen::MatrixXd read_wav(const std::string& path, int* sample_rate) {
  const std::string buf = read_text_file(path);
  if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 ||
      buf.compare(8, 4, "WAVE") != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }

  int channels = 0;
  int rate = 0;
  bool fmt_seen = false;
  size_t data_at = 0;
  std::uint32_t data_size = 0;
  size_t at = 12;
  while (at + 8 <= buf.size()) {
    const std::string id = buf.substr(at, 4);
    const std::uint32_t size = read_u32(buf, at + 4);
    const size_t body = at + 8;
    if (body + size > buf.size()) {
      throw IoError("truncated chunk in " + path);
    }
    if (id == "fmt ") {
      if (size < 16) throw IoError("malformed fmt chunk in " + path);
      const std::uint16_t format = read_u16(buf, body);
      const std::uint16_t bits = read_u16(buf, body + 14);
      if (format != 3 || bits != 32) {
        throw IoError("unsupported WAV encoding in " + path +
                      " (need 32-bit float)");
      }
      channels = read_u16(buf, body + 2);
      rate = static_cast<int>(read_u32(buf, body + 4));
      fmt_seen = true;
    } else if (id == "data") {
      data_at = body;
      data_size = size;
    }
    at = body + size + (size % 2);  // chunks are padded to even sizes
  }
  if (!fmt_seen || data_at == 0) {
    throw IoError("missing fmt or data chunk in " + path);
  }
  if (channels < 1) throw IoError("no channels in " + path);
  const Eigen::Index samples = data_size / 4 / channels;
  Eigen::MatrixXd out(channels, samples);
  for (Eigen::Index t = 0; t < samples; ++t) {
    for (int c = 0; c < channels; ++c) {
      out(c, t) = read_f32(buf, data_at + 4 * (t * channels + c));
    }
  }
  if (sample_rate != nullptr) *sample_rate = rate;
  return out;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("matrix_to_json: matrix must be square");
  }
  nlohmann::json j;
  j["dim"] = m.rows();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  try {
    const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (dim < 1 || static_cast<Eigen::Index>(re.size()) != dim * dim ||
        static_cast<Eigen::Index>(im.size()) != dim * dim) {
      throw ConfigError("matrix_from_json: dim does not match entry count");
    }
    Eigen::MatrixXcd out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const size_t flat = static_cast<size_t>(r * dim + c);
        out(r, c) = {re.at(flat).get<double>(), im.at(flat).get<double>()};
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("matrix_from_json: ") + e.what());
  }
}

void write_pattern_csv(const std::string& path, const BeamPattern& pattern) {
  std::string out = "theta_deg,power,power_db\n";
  for (Eigen::Index i = 0; i < pattern.thetas.size(); ++i) {
    out += format_number(pattern.thetas(i) / kDegree);
    out += ',';
    out += format_number(pattern.power(i));
    out += ',';
    out += format_number(to_db(pattern.power(i)));
    out += '\n';
  }
  write_text_file(path, out);
}

nlohmann::json pattern_to_json(const BeamPattern& pattern) {
  nlohmann::json j;
  j["beamformer"] = beamformer_name(pattern.kind);
  j["mean"] = mean_kind_name(pattern.mean_kind);
  j["segment_index"] = pattern.segment_index;
  nlohmann::json theta = nlohmann::json::array();
  nlohmann::json power = nlohmann::json::array();
  for (Eigen::Index i = 0; i < pattern.thetas.size(); ++i) {
    theta.push_back(pattern.thetas(i) / kDegree);
    power.push_back(pattern.power(i));
  }
  j["theta_deg"] = std::move(theta);
  j["power"] = std::move(power);
  return j;
}

nlohmann::json metrics_to_json(const std::vector<MetricRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const MetricRow& row : rows) {
    nlohmann::json j;
    j["trial"] = row.trial;
    j["mean"] = mean_kind_name(row.mean);
    j["beamformer"] = beamformer_name(row.beamformer);
    j["output_sir_db"] = row.output_sir_db;
    j["doa_error_deg"] = row.doa_error_deg;
    j["directivity_db"] = row.directivity_db;
    j["sir_infinite"] = row.sir_infinite;
    out.push_back(std::move(j));
  }
  return out;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricRow>& rows) {
  std::string out =
      "trial,mean,beamformer,output_sir_db,doa_error_deg,directivity_db,"
      "sir_infinite\n";
  for (const MetricRow& row : rows) {
    out += std::to_string(row.trial);
    out += ',';
    out += mean_kind_name(row.mean);
    out += ',';
    out += beamformer_name(row.beamformer);
    out += ',';
    out += format_number(row.output_sir_db);
    out += ',';
    out += format_number(row.doa_error_deg);
    out += ',';
    out += format_number(row.directivity_db);
    out += ',';
    out += row.sir_infinite ? '1' : '0';
    out += '\n';
  }
  write_text_file(path, out);
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    nlohmann::json j;
    j["input_sir_db"] = row.input_sir_db;
    j["snr_db"] = row.snr_db;
    j["t60"] = row.t60;
    j["mean"] = mean_kind_name(row.mean);
    j["beamformer"] = beamformer_name(row.beamformer);
    j["sir_db_p25"] = row.sir_db_p25;
    j["sir_db_p50"] = row.sir_db_p50;
    j["sir_db_p75"] = row.sir_db_p75;
    j["directivity_db_p25"] = row.directivity_db_p25;
    j["directivity_db_p50"] = row.directivity_db_p50;
    j["directivity_db_p75"] = row.directivity_db_p75;
    j["doa_error_deg_p50"] = row.doa_error_deg_p50;
    j["trials"] = row.trials;
    out.push_back(std::move(j));
  }
  return out;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::string out =
      "input_sir_db,snr_db,t60,mean,beamformer,sir_db_p25,sir_db_p50,"
      "sir_db_p75,directivity_db_p25,directivity_db_p50,directivity_db_p75,"
      "doa_error_deg_p50,trials\n";
  for (const SweepRow& row : rows) {
    out += format_number(row.input_sir_db);
    out += ',';
    out += format_number(row.snr_db);
    out += ',';
    out += format_number(row.t60);
    out += ',';
    out += mean_kind_name(row.mean);
    out += ',';
    out += beamformer_name(row.beamformer);
    for (double v : {row.sir_db_p25, row.sir_db_p50, row.sir_db_p75,
                     row.directivity_db_p25, row.directivity_db_p50,
                     row.directivity_db_p75, row.doa_error_deg_p50}) {
      out += ',';
      out += format_number(v);
    }
    out += ',';
    out += std::to_string(row.trials);
    out += '\n';
  }
  write_text_file(path, out);
}

nlohmann::json load_config(const std::string& path) {
  const std::string text = read_text_file(path);
  const size_t dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".toml") return parse_toml_lite(text);
  if (ext == ".json") {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  throw IoError("unsupported config extension (want .toml or .json): " +
                path);
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_config(path));
}

}  // namespace rbeam
