#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ipl/analysis.hpp"
#include "ipl/hamiltonian.hpp"

namespace ipl {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

/// Radians from a decimal or a pi expression: "pi/4", "3*pi/8", "3pi/8",
/// "-pi/8", "2 * pi", "0.785".
double parse_angle(std::string_view text);

/// index,eigenvalue,spacing_next,ipr,cfs,com,w_left,w_right,nodes,band,subdomain,multiplet_id
/// State, band and multiplet numbers are 1-based; spacing_next is empty on the last row.
std::string state_csv(const SpectralReport& report);
std::string spectrum_csv(const SpectralReport& report);
/// site,diag,offdiag_next with 1-based sites.
std::string hamiltonian_csv(const TridiagonalHamiltonian& h);
/// Binary P5 graymap, width = sites, height = rows, maxval 255.
std::string pgm_bytes(const EigenstateMap& map);

void write_file(const std::filesystem::path& path, std::string_view bytes);
void write_state_csv(const SpectralReport& report, const std::filesystem::path& path);
void write_pgm(const EigenstateMap& map, const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ipl
