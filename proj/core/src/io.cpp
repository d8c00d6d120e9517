#include "cissir/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cissir {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

namespace {

std::string format_complex(cd v) { return format_double(v.real()) + ":" + format_double(v.imag()); }

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("malformed number '" + std::string(s) + "'");
  return v;
}

cd parse_complex(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw std::runtime_error("malformed complex value '" + std::string(s) + "'");
  return {parse_double(s.substr(0, colon)), parse_double(s.substr(colon + 1))};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

// "# <magic> v1 k=v k=v ..."
std::map<std::string, std::string> parse_header(const std::string& line, const std::string& magic) {
  std::istringstream in(line);
  std::string hash, tag, version;
  in >> hash >> tag >> version;
  if (hash != "#" || tag != magic || version != "v1")
    throw std::runtime_error("expected '# " + magic + " v1' header");
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed header field '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

int header_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("header lacks " + key);
  const double v = parse_double(it->second);
  if (v != static_cast<int>(v) || v < 1) throw std::runtime_error("header " + key + " must be a positive integer");
  return static_cast<int>(v);
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_channel(const TappedSiChannel& channel, double sample_interval) {
  std::ostringstream out;
  out << "# si-channel v1 M=" << channel.rx_dim() << " N=" << channel.tx_dim()
      << " ts=" << format_double(sample_interval) << "\n";
  for (const auto& t : channel.taps()) {
    out << format_double(t.delay);
    for (Eigen::Index m = 0; m < t.gain.rows(); ++m)
      for (Eigen::Index n = 0; n < t.gain.cols(); ++n) out << "," << format_complex(t.gain(m, n));
    out << "\n";
  }
  return out.str();
}

void write_channel_file(const fs::path& path, const TappedSiChannel& channel, double sample_interval) {
  write_file_atomic(path, format_channel(channel, sample_interval));
}

ChannelFile parse_channel(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw std::runtime_error("empty channel file");
  const auto kv = parse_header(lines[0], "si-channel");
  const int M = header_int(kv, "M"), N = header_int(kv, "N");
  const auto ts = kv.find("ts");
  if (ts == kv.end()) throw std::runtime_error("header lacks ts");
  const double sample_interval = parse_double(ts->second);
  std::vector<Tap> taps;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split(lines[l], ',');
    if (fields.size() != static_cast<std::size_t>(M * N + 1))
      throw std::runtime_error("channel line " + std::to_string(l + 1) + " has wrong field count");
    Tap t{parse_double(fields[0]), CMat(M, N)};
    for (int m = 0; m < M; ++m)
      for (int n = 0; n < N; ++n) t.gain(m, n) = parse_complex(fields[static_cast<std::size_t>(1 + m * N + n)]);
    taps.push_back(std::move(t));
  }
  return {TappedSiChannel(std::move(taps), M, N), sample_interval};
}

ChannelFile read_channel_file(const fs::path& path) { return parse_channel(read_all(path)); }

std::string format_codebook(const Codebook& cb) {
  std::ostringstream out;
  out << "# codebook v1 P=" << cb.antennas() << " J=" << cb.beams() << " mode=" << to_string(cb.mode()) << "\n";
  for (int p = 0; p < cb.antennas(); ++p) {
    for (int j = 0; j < cb.beams(); ++j) out << (j ? "," : "") << format_complex(cb.entries()(p, j));
    out << "\n";
  }
  return out.str();
}

void write_codebook_file(const fs::path& path, const Codebook& cb) {
  write_file_atomic(path, format_codebook(cb));
}

Codebook parse_codebook(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw std::runtime_error("empty codebook file");
  const auto kv = parse_header(lines[0], "codebook");
  const int P = header_int(kv, "P"), J = header_int(kv, "J");
  const auto mode = kv.find("mode");
  if (mode == kv.end()) throw std::runtime_error("header lacks mode");
  if (lines.size() != static_cast<std::size_t>(P + 1)) throw std::runtime_error("codebook has wrong row count");
  CMat e(P, J);
  for (int p = 0; p < P; ++p) {
    const auto fields = split(lines[static_cast<std::size_t>(p + 1)], ',');
    if (fields.size() != static_cast<std::size_t>(J))
      throw std::runtime_error("codebook row " + std::to_string(p + 1) + " has wrong field count");
    for (int j = 0; j < J; ++j) e(p, j) = parse_complex(fields[static_cast<std::size_t>(j)]);
  }
  return Codebook(std::move(e), mode_from_string(mode->second));
}

Codebook read_codebook_file(const fs::path& path) { return parse_codebook(read_all(path)); }

}  // namespace cissir
