#pragma once

// Test-only oracles independent of the library's invariant engines:
//  - knot signature from a Goeritz matrix with the Gordon-Litherland
//    correction term, computed directly from the PD code's faces;
//  - Seifert genus of a positive diagram from its Seifert circle count.

#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "gleamlab/diagram.hpp"
#include "gleamlab/exactalg.hpp"

namespace gleamlab::oracle {

// Signature (positive minus negative pivots) of a symmetric rational matrix
// via congruence diagonalization.
inline int matrix_signature(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  int sig = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_with = n;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (m[j][j] != 0) {
          swap_with = j;
          break;
        }
      }
      if (swap_with != n) {
        std::swap(m[k], m[swap_with]);
        for (auto& row : m) std::swap(row[k], row[swap_with]);
      } else {
        std::size_t partner = n;
        for (std::size_t j = k + 1; j < n; ++j) {
          if (m[k][j] != 0) {
            partner = j;
            break;
          }
        }
        if (partner == n) continue;  // zero row: null direction
        // e_k <- e_k + e_partner makes the pivot 2*m[k][partner] != 0.
        for (std::size_t i = 0; i < n; ++i) m[k][i] += m[partner][i];
        for (std::size_t i = 0; i < n; ++i) m[i][k] += m[i][partner];
      }
    }
    const Rational pivot = m[k][k];
    sig += pivot > 0 ? 1 : -1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const Rational f = m[i][k] / pivot;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
    for (std::size_t i = k + 1; i < n; ++i) m[k][i] = 0;
    for (std::size_t i = k + 1; i < n; ++i) m[i][k] = 0;
  }
  return sig;
}

struct FaceStructure {
  std::vector<int> corner_face;  // corner 4*x + p lies between positions p and p+1
  int faces = 0;
};

inline FaceStructure faces_of(const KnotDiagram& d) {
  const auto& pd = d.crossings();
  const std::size_t n = pd.size();
  std::map<int, std::vector<std::size_t>> where;  // label -> darts (4*x + p)
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t p = 0; p < 4; ++p) where[pd[x][p]].push_back(4 * x + p);
  }
  auto other = [&](std::size_t dart) {
    const auto& w = where.at(pd[dart / 4][dart % 4]);
    return w[0] == dart ? w[1] : w[0];
  };
  FaceStructure fs;
  fs.corner_face.assign(4 * n, -1);
  for (std::size_t start = 0; start < 4 * n; ++start) {
    if (fs.corner_face[start] >= 0) continue;
    std::size_t cur = start;
    while (fs.corner_face[cur] < 0) {
      fs.corner_face[cur] = fs.faces;
      const std::size_t x = cur / 4;
      cur = other(4 * x + (cur % 4 + 1) % 4);
    }
    ++fs.faces;
  }
  return fs;
}

// Gordon-Litherland: sigma = sign(G) - mu. Crossing corners 1 and 3 (b-c and
// d-a) are the A-corners. eta(c) = +1 when the white corners are the
// B-corners. A crossing is of type II when its oriented smoothing merges the
// black corners; mu sums eta over type II crossings. `white_parity` picks
// which checkerboard class is white, and the result must not depend on it.
// With these choices the positive trefoil has signature -2.
inline int goeritz_signature(const KnotDiagram& d, int white_parity = 0) {
  const std::size_t n = d.crossing_count();
  if (n == 0) return 0;
  FaceStructure fs = faces_of(d);

  // Two-colour the faces: corners (x,p) and (x,p+1) have opposite colours.
  std::vector<int> colour(static_cast<std::size_t>(fs.faces), -1);
  colour[static_cast<std::size_t>(fs.corner_face[0])] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t p = 0; p < 4; ++p) {
        const auto f = static_cast<std::size_t>(fs.corner_face[4 * x + p]);
        const auto g = static_cast<std::size_t>(fs.corner_face[4 * x + (p + 1) % 4]);
        if (colour[f] >= 0 && colour[g] < 0) {
          colour[g] = 1 - colour[f];
          changed = true;
        } else if (colour[g] >= 0 && colour[f] < 0) {
          colour[f] = 1 - colour[g];
          changed = true;
        }
      }
    }
  }

  std::map<int, std::size_t> white_index;
  for (int f = 0; f < fs.faces; ++f) {
    if (colour[static_cast<std::size_t>(f)] == white_parity) {
      white_index.emplace(f, white_index.size());
    }
  }
  const std::size_t w = white_index.size();
  std::vector<std::vector<Rational>> g(w, std::vector<Rational>(w, Rational(0)));
  int mu = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const bool white_is_a = colour[static_cast<std::size_t>(fs.corner_face[4 * x + 1])] == white_parity;
    const int eta = white_is_a ? -1 : 1;
    // Oriented smoothing merges the A-corners at positive crossings.
    const bool merges_white = (d.signs()[x] > 0) == white_is_a;
    if (!merges_white) mu += eta;
    const std::size_t c1 = white_is_a ? 1 : 0;
    const auto i = white_index.at(fs.corner_face[4 * x + c1]);
    const auto j = white_index.at(fs.corner_face[4 * x + c1 + 2]);
    if (i != j) {
      g[i][j] -= eta;
      g[j][i] -= eta;
      g[i][i] += eta;
      g[j][j] += eta;
    }
  }
  // Drop the first white region.
  std::vector<std::vector<Rational>> reduced;
  for (std::size_t r = 1; r < w; ++r) reduced.emplace_back(g[r].begin() + 1, g[r].end());
  return matrix_signature(reduced) - mu;
}

// Number of circles of the oriented smoothing.
inline int seifert_circles(const KnotDiagram& d) {
  const std::size_t n = d.crossing_count();
  if (n == 0) return 1;
  std::vector<int> parent(static_cast<std::size_t>(d.max_label()) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
  for (std::size_t x = 0; x < n; ++x) {
    const auto& c = d.crossings()[x];
    if (d.signs()[x] > 0) {
      unite(c[0], c[1]);
      unite(c[2], c[3]);
    } else {
      unite(c[0], c[3]);
      unite(c[1], c[2]);
    }
  }
  std::set<int> roots;
  for (int l = 1; l <= d.max_label(); ++l) roots.insert(find(l));
  return static_cast<int>(roots.size());
}

// Genus of the Seifert-algorithm surface; equals the knot genus for positive
// (and more generally homogeneous) diagrams.
inline int seifert_surface_genus(const KnotDiagram& d) {
  return (1 - seifert_circles(d) + static_cast<int>(d.crossing_count())) / 2;
}

}  // namespace gleamlab::oracle
