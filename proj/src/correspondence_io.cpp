#include "relpose/correspondence_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "relpose/error.hpp"

namespace relpose {

std::vector<BearingPair> read_correspondences(std::istream& is) {
  std::vector<BearingPair> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v[6];
    for (double& x : v) {
      if (!(ss >> x)) fail(Errc::ParseError, "line " + std::to_string(lineno) + ": expected six numbers");
    }
    std::string rest;
    if (ss >> rest) fail(Errc::ParseError, "line " + std::to_string(lineno) + ": trailing text '" + rest + "'");
    try {
      out.emplace_back(Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5]));
    } catch (const Error& e) {
      fail(Errc::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<BearingPair> read_correspondences_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open '" + path + "'");
  return read_correspondences(in);
}

void write_correspondences(std::ostream& os, std::span<const BearingPair> pairs) {
  char buf[256];
  for (const BearingPair& p : pairs) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", p.q1().x(), p.q1().y(), p.q1().z(),
                  p.q2().x(), p.q2().y(), p.q2().z());
    os << buf;
  }
}

}  // namespace relpose
