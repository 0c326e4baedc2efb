#include "ipl/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "ipl/errors.hpp"

namespace ipl {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw InvalidArgument("cannot format number");
  return std::string(buf.data(), end);
}

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c != ' ' && c != '\t') out.push_back(c);
  }
  return out;
}

double parse_plain(std::string_view text, std::string_view original) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument("cannot parse angle '" + std::string(original) + "'");
  }
  return value;
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string s = strip_spaces(text);
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    if (s.empty()) throw InvalidArgument("empty angle");
    return parse_plain(s, text);
  }

  std::string factor = s.substr(0, pi_pos);
  if (!factor.empty() && factor.back() == '*') factor.pop_back();
  double multiplier = 1.0;
  if (factor == "-") {
    multiplier = -1.0;
  } else if (factor == "+") {
    multiplier = 1.0;
  } else if (!factor.empty()) {
    multiplier = parse_plain(factor, text);
  }

  const std::string rest = s.substr(pi_pos + 2);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw InvalidArgument("cannot parse angle '" + std::string(text) + "'");
    divisor = parse_plain(std::string_view(rest).substr(1), text);
    if (divisor == 0.0) throw InvalidArgument("division by zero in angle '" + std::string(text) + "'");
  }
  return multiplier * std::numbers::pi / divisor;
}

std::string state_csv(const SpectralReport& report) {
  std::string out = "index,eigenvalue,spacing_next,ipr,cfs,com,w_left,w_right,nodes,band,subdomain,multiplet_id\n";
  const std::size_t n = report.values.size();
  std::size_t group = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const StateMeasures& m = report.states[k];
    while (report.multiplets.groups[group].last() < k) ++group;
    out += std::to_string(k + 1);
    out += ',' + format_number(report.values[k]);
    out += ',';
    if (k + 1 < n) out += format_number(report.spacing.spacings[k]);
    out += ',' + format_number(m.ipr);
    out += ',' + format_number(m.cfs);
    out += ',' + format_number(m.com);
    out += ',' + format_number(m.w_left);
    out += ',' + format_number(m.w_right);
    out += ',' + std::to_string(m.nodes);
    out += ',' + std::to_string(report.bands.band_of(k) + 1);
    out += ',';
    out += static_cast<char>(report.labels.labels[k]);
    out += ',' + std::to_string(group + 1);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const SpectralReport& report) {
  std::string out = "index,eigenvalue,band\n";
  for (std::size_t k = 0; k < report.values.size(); ++k) {
    out += std::to_string(k + 1) + ',' + format_number(report.values[k]) + ',' +
           std::to_string(report.bands.band_of(k) + 1) + '\n';
  }
  return out;
}

std::string hamiltonian_csv(const TridiagonalHamiltonian& h) {
  std::string out = "site,diag,offdiag_next\n";
  for (std::size_t i = 0; i < h.diag.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_number(h.diag[i]) + ',';
    if (i < h.offdiag.size()) out += format_number(h.offdiag[i]);
    out += '\n';
  }
  return out;
}

std::string pgm_bytes(const EigenstateMap& map) {
  if (map.rows() == 0 || map.sites == 0) {
    throw InvalidArgument("cannot rasterize an empty eigenstate map");
  }
  std::string out = "P5\n" + std::to_string(map.sites) + ' ' + std::to_string(map.rows()) + "\n255\n";
  out.reserve(out.size() + map.pixels.size());
  for (double p : map.pixels) {
    const double clamped = std::clamp(p, 0.0, 1.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * clamped))));
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

void write_state_csv(const SpectralReport& report, const std::filesystem::path& path) {
  write_file(path, state_csv(report));
}

void write_pgm(const EigenstateMap& map, const std::filesystem::path& path) {
  write_file(path, pgm_bytes(map));
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  const std::string bytes{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  return sha256_hex(bytes);
}

}  // namespace ipl
