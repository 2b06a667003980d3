#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relpose/geometry.hpp"

namespace relpose {

// One pair per line: "x1 y1 z1 x2 y2 z2". Blank lines and lines starting with
// '#' are skipped. Throws ParseError naming the offending line.
std::vector<BearingPair> read_correspondences(std::istream& is);
std::vector<BearingPair> read_correspondences_file(const std::string& path);

void write_correspondences(std::ostream& os, std::span<const BearingPair> pairs);

}  // namespace relpose
