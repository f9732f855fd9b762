/* Copyright 2026 The pstnet Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Finite groups as explicit multiplication tables: built-in families
// (cyclic, dihedral, Clifford), direct products, Cayley-table ingestion,
// conjugacy classes and centers. Element 0 is always the identity.

#pragma once

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pstnet/common.hpp"

namespace pstnet {

struct Group {
  int order = 0;
  std::vector<int> mul;             // row-major order x order
  std::vector<int> inv;
  std::vector<std::string> labels;  // labels[0] is the identity

  int at(int x, int y) const { return mul[static_cast<std::size_t>(x) * order + y]; }
  int inverse(int x) const { return inv[x]; }
  int conjugate(int g, int x) const { return at(at(g, x), inv[g]); }  // g x g^-1

  bool is_abelian() const {
    for (int x = 0; x < order; ++x)
      for (int y = x + 1; y < order; ++y)
        if (at(x, y) != at(y, x)) return false;
    return true;
  }
};

/// Conjugacy classes, ordered with the identity class first and then by
/// ascending smallest member index. This ordering is fixed so that P/Q
/// matrices and file outputs are reproducible.
struct ClassSet {
  std::vector<std::vector<int>> classes;  // each sorted ascending
  std::vector<int> class_of;              // length N
  std::vector<int> sizes;                 // kappa_i = |C_i|
  std::vector<int> inverse_class;         // i -> i* with C_{i*} = C_i^{-1}
  std::vector<int> representatives;       // smallest member of each class

  int count() const { return static_cast<int>(classes.size()); }
  int diameter() const { return count() - 1; }
};

inline int element_order(const Group& g, int x) {
  int y = x, k = 1;
  while (y != 0) {
    y = g.at(y, x);
    ++k;
  }
  return k;
}

namespace detail {

inline void compute_inverses(Group& g) {
  g.inv.assign(g.order, -1);
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y)
      if (g.at(x, y) == 0) {
        g.inv[x] = y;
        break;
      }
  for (int x = 0; x < g.order; ++x)
    if (g.inv[x] < 0 || g.at(g.inv[x], x) != 0)
      throw NotAGroup("element " + std::to_string(x) + " has no two-sided inverse");
}

}  // namespace detail

/// Structural validation: Latin square, identity at index 0, two-sided
/// inverses, associativity (exhaustive for N <= 512, >= 10*N^2 sampled
/// triples above that, fixed seed).
inline void validate_group(const Group& g) {
  const int n = g.order;
  if (n <= 0) throw InvalidParameter("group order must be positive");
  if (g.mul.size() != static_cast<std::size_t>(n) * n)
    throw MalformedTable("multiplication table has wrong shape");
  std::vector<char> seen(n);
  for (int x = 0; x < n; ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int y = 0; y < n; ++y) {
      int v = g.at(x, y);
      if (v < 0 || v >= n) throw MalformedTable("table entry out of range");
      if (seen[v]++) throw MalformedTable("row " + std::to_string(x) + " is not a permutation");
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int y = 0; y < n; ++y) {
      int v = g.at(y, x);
      if (seen[v]++) throw MalformedTable("column " + std::to_string(x) + " is not a permutation");
    }
  }
  for (int x = 0; x < n; ++x)
    if (g.at(0, x) != x || g.at(x, 0) != x)
      throw NotAGroup("element 0 is not a two-sided identity");
  if (g.inv.size() != static_cast<std::size_t>(n))
    throw NotAGroup("inverse table missing or wrong length");
  for (int x = 0; x < n; ++x) {
    if (g.inv[x] < 0 || g.inv[x] >= n || g.at(x, g.inv[x]) != 0 || g.at(g.inv[x], x) != 0)
      throw NotAGroup("inverse table inconsistent at element " + std::to_string(x));
  }
  auto assoc = [&](int x, int y, int z) {
    return g.at(g.at(x, y), z) == g.at(x, g.at(y, z));
  };
  if (n <= 512) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (!assoc(x, y, z)) throw NotAGroup("associativity fails");
  } else {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const long long trials = 10ll * n * n;
    for (long long t = 0; t < trials; ++t)
      if (!assoc(pick(rng), pick(rng), pick(rng)))
        throw NotAGroup("associativity fails (sampled)");
  }
}

inline Group make_cyclic(int n) {
  if (n < 1) throw InvalidParameter("cyclic order must be >= 1");
  Group g;
  g.order = n;
  g.mul.resize(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) g.mul[static_cast<std::size_t>(x) * n + y] = (x + y) % n;
  g.labels.resize(n);
  for (int x = 0; x < n; ++x) g.labels[x] = std::to_string(x);
  detail::compute_inverses(g);
  return g;
}

/// D_2n = <a, b : a^n = 1, b^2 = 1, b^-1 a b = a^-1> on elements
/// a^r (index r) and a^r b (index n + r).
inline Group make_dihedral(int two_n) {
  if (two_n < 4 || two_n % 2 != 0)
    throw InvalidParameter("dihedral order must be an even integer >= 4");
  const int n = two_n / 2;
  Group g;
  g.order = two_n;
  g.mul.resize(static_cast<std::size_t>(two_n) * two_n);
  auto idx = [n](bool refl, int r) { return (refl ? n : 0) + ((r % n) + n) % n; };
  for (int x = 0; x < two_n; ++x) {
    const bool xr = x >= n;
    const int rx = xr ? x - n : x;
    for (int y = 0; y < two_n; ++y) {
      const bool yr = y >= n;
      const int ry = yr ? y - n : y;
      // (a^rx b^xr)(a^ry b^yr): b a^r = a^-r b
      int r = xr ? rx - ry : rx + ry;
      g.mul[static_cast<std::size_t>(x) * two_n + y] = idx(xr != yr, r);
    }
  }
  g.labels.resize(two_n);
  for (int r = 0; r < n; ++r) {
    g.labels[r] = r == 0 ? "e" : (r == 1 ? "a" : "a^" + std::to_string(r));
    g.labels[n + r] = r == 0 ? "b" : (r == 1 ? "ab" : "a^" + std::to_string(r) + "b");
  }
  detail::compute_inverses(g);
  return g;
}

/// Clifford group CL(n) of order 2^(n+1): elements +-gamma_{i1}...gamma_{ij}
/// held abstractly as (sign, subset) pairs, index = 2*subset + sign.
/// Multiplication counts anticommutations; gamma_i^2 = 1.
inline Group make_clifford(int n) {
  if (n < 3) throw InvalidParameter("clifford index must be >= 3");
  if (n + 1 >= 31 || (1 << (n + 1)) > kDefaultMaxOrder)
    throw SizeLimit("clifford group order exceeds the configured maximum");
  const int order = 1 << (n + 1);
  auto swap_parity = [](unsigned a, unsigned b) {
    // number of pairs (i in a, j in b) with i > j, mod 2
    int cnt = 0;
    while (b) {
      const int j = std::countr_zero(b);
      cnt += std::popcount(a >> (j + 1));
      b &= b - 1;
    }
    return cnt & 1;
  };
  Group g;
  g.order = order;
  g.mul.resize(static_cast<std::size_t>(order) * order);
  for (int x = 0; x < order; ++x) {
    const unsigned ma = static_cast<unsigned>(x) >> 1, sa = x & 1;
    for (int y = 0; y < order; ++y) {
      const unsigned mb = static_cast<unsigned>(y) >> 1, sb = y & 1;
      const unsigned sign = sa ^ sb ^ static_cast<unsigned>(swap_parity(ma, mb));
      g.mul[static_cast<std::size_t>(x) * order + y] =
          static_cast<int>(((ma ^ mb) << 1) | sign);
    }
  }
  g.labels.resize(order);
  for (int x = 0; x < order; ++x) {
    const unsigned m = static_cast<unsigned>(x) >> 1;
    std::string s = (x & 1) ? "-" : "+";
    if (m == 0) {
      s += "1";
    } else {
      for (int i = 0; i < n; ++i)
        if (m & (1u << i)) s += "g" + std::to_string(i + 1);
    }
    g.labels[x] = s;
  }
  detail::compute_inverses(g);
  return g;
}

/// Componentwise product on pairs, index = x1*|G2| + x2.
inline Group direct_product(const Group& g1, const Group& g2,
                            int max_order = kDefaultMaxOrder) {
  const long long n = static_cast<long long>(g1.order) * g2.order;
  if (n > max_order)
    throw SizeLimit("product order " + std::to_string(n) +
                    " exceeds the configured maximum " + std::to_string(max_order));
  Group g;
  g.order = static_cast<int>(n);
  g.mul.resize(static_cast<std::size_t>(n) * n);
  const int n2 = g2.order;
  for (int x1 = 0; x1 < g1.order; ++x1)
    for (int x2 = 0; x2 < n2; ++x2) {
      const int x = x1 * n2 + x2;
      for (int y1 = 0; y1 < g1.order; ++y1)
        for (int y2 = 0; y2 < n2; ++y2)
          g.mul[static_cast<std::size_t>(x) * n + (y1 * n2 + y2)] =
              g1.at(x1, y1) * n2 + g2.at(x2, y2);
    }
  g.labels.resize(n);
  for (int x1 = 0; x1 < g1.order; ++x1)
    for (int x2 = 0; x2 < n2; ++x2)
      g.labels[x1 * n2 + x2] = g1.labels[x1] + "|" + g2.labels[x2];
  detail::compute_inverses(g);
  return g;
}

/// Validates a raw Cayley table and returns the group, with the identity
/// relocated to index 0 (by swapping labels 0 <-> e).
inline Group from_cayley_table(const std::vector<std::vector<int>>& table,
                               std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw MalformedTable("empty table");
  for (const auto& row : table)
    if (static_cast<int>(row.size()) != n) throw MalformedTable("table is not square");
  for (const auto& row : table)
    for (int v : row)
      if (v < 0 || v >= n) throw MalformedTable("table entry out of range");
  // Latin-square check first: a repeated entry is a malformed table, not
  // merely a non-group.
  {
    std::vector<char> seen(n);
    for (int x = 0; x < n; ++x) {
      std::fill(seen.begin(), seen.end(), 0);
      for (int y = 0; y < n; ++y)
        if (seen[table[x][y]]++) throw MalformedTable("row " + std::to_string(x) + " repeats an entry");
      std::fill(seen.begin(), seen.end(), 0);
      for (int y = 0; y < n; ++y)
        if (seen[table[y][x]]++) throw MalformedTable("column " + std::to_string(x) + " repeats an entry");
    }
  }
  int e = -1;
  for (int c = 0; c < n; ++c) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table[c][x] == x && table[x][c] == x;
    if (ok) { e = c; break; }
  }
  if (e < 0) throw NotAGroup("table has no two-sided identity");
  // Relabel so the identity sits at index 0.
  std::vector<int> perm(n);  // perm[new] = old
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[e]);
  std::vector<int> inv_perm(n);
  for (int i = 0; i < n; ++i) inv_perm[perm[i]] = i;

  Group g;
  g.order = n;
  g.mul.resize(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      g.mul[static_cast<std::size_t>(x) * n + y] = inv_perm[table[perm[x]][perm[y]]];
  if (labels.empty()) {
    labels.resize(n);
    for (int i = 0; i < n; ++i) labels[i] = "x" + std::to_string(i);
  }
  if (static_cast<int>(labels.size()) != n) throw MalformedTable("label count mismatch");
  g.labels.resize(n);
  for (int i = 0; i < n; ++i) g.labels[i] = labels[perm[i]];
  detail::compute_inverses(g);
  validate_group(g);
  return g;
}

inline ClassSet conjugacy_classes(const Group& g) {
  const int n = g.order;
  ClassSet cs;
  cs.class_of.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (cs.class_of[x] >= 0) continue;
    const int id = static_cast<int>(cs.classes.size());
    std::vector<int> orbit;
    for (int h = 0; h < n; ++h) {
      const int y = g.conjugate(h, x);
      if (cs.class_of[y] < 0) {
        cs.class_of[y] = id;
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    cs.classes.push_back(std::move(orbit));
  }
  const int k = cs.count();
  cs.sizes.resize(k);
  cs.representatives.resize(k);
  cs.inverse_class.resize(k);
  for (int i = 0; i < k; ++i) {
    cs.sizes[i] = static_cast<int>(cs.classes[i].size());
    cs.representatives[i] = cs.classes[i].front();
    cs.inverse_class[i] = cs.class_of[g.inv[cs.representatives[i]]];
  }
  return cs;
}

inline std::vector<int> center(const Group& g) {
  std::vector<int> z;
  for (int x = 0; x < g.order; ++x) {
    bool central = true;
    for (int y = 0; y < g.order && central; ++y) central = g.at(x, y) == g.at(y, x);
    if (central) z.push_back(x);
  }
  return z;
}

}  // namespace pstnet
