#pragma once

#include <array>
#include <compare>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace rwi {

// Lattice site / displacement in up to three dimensions. Unused coordinates
// stay zero, so a Site is valid for any walk dimension <= 3.
struct Site {
  std::array<int, 3> c{0, 0, 0};

  Site() = default;
  Site(int x) : c{x, 0, 0} {}
  Site(int x, int y) : c{x, y, 0} {}
  Site(int x, int y, int z) : c{x, y, z} {}

  friend auto operator<=>(const Site&, const Site&) = default;

  Site operator+(const Site& o) const {
    return Site{c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]};
  }
  Site operator-(const Site& o) const {
    return Site{c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2]};
  }
  Site operator-() const { return Site{-c[0], -c[1], -c[2]}; }

  int linf() const {
    int m = 0;
    for (int v : c) m = std::max(m, std::abs(v));
    return m;
  }
};

inline std::string site_to_string(const Site& s, int dim) {
  std::ostringstream os;
  for (int i = 0; i < dim; ++i) {
    if (i) os << ',';
    os << s.c[i];
  }
  return os.str();
}

// Parses "x0,x1,..." with exactly dim coordinates; returns false on bad input.
inline bool parse_site(const std::string& text, int dim, Site& out) {
  std::istringstream is(text);
  Site s;
  for (int i = 0; i < dim; ++i) {
    if (!(is >> s.c[i])) return false;
    if (i + 1 < dim) {
      char sep = 0;
      if (!(is >> sep) || sep != ',') return false;
    }
  }
  char trailing = 0;
  if (is >> trailing) return false;
  out = s;
  return true;
}

// Parses "site;site;..." lists as used by the CLI.
inline bool parse_site_list(const std::string& text, int dim, std::vector<Site>& out) {
  out.clear();
  std::string piece;
  std::istringstream is(text);
  while (std::getline(is, piece, ';')) {
    Site s;
    if (!parse_site(piece, dim, s)) return false;
    out.push_back(s);
  }
  return !out.empty();
}

}  // namespace rwi
