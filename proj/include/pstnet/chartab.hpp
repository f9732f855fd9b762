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

// Intersection numbers and the complex character table of a finite group.
//
// The class-sum matrices B_i with (B_i)_{jk} = p^k_{ij} commute, and their
// simultaneous eigenvectors w_r have components w_{r,i} = kappa_i
// chi_r(alpha_i) / d_r (the class-sum eigenvalues). A random seeded linear
// combination of the B_i generically separates the eigenvectors; degrees are
// recovered from row orthogonality and rounded to integers.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <vector>

#include "pstnet/common.hpp"
#include "pstnet/group.hpp"

namespace pstnet {

struct IntersectionTensor {
  int classes = 0;
  std::vector<int> p;          // p[(k*classes + i)*classes + j] = p^k_{ij}
  std::vector<int> valencies;  // kappa_i

  int at(int k, int i, int j) const {
    return p[(static_cast<std::size_t>(k) * classes + i) * classes + j];
  }
  int& at(int k, int i, int j) {
    return p[(static_cast<std::size_t>(k) * classes + i) * classes + j];
  }
};

namespace detail {

// p^k_{ij} by exact counting: with alpha = e and beta a representative of
// C_k, count gamma with gamma in C_i and beta gamma^-1 in C_j. Independent
// of the representative; re-counted with a second one when kappa_k > 1.
inline IntersectionTensor count_intersections(const Group& g,
                                              const std::vector<int>& class_of,
                                              const std::vector<std::vector<int>>& classes) {
  const int d1 = static_cast<int>(classes.size());
  IntersectionTensor t;
  t.classes = d1;
  t.p.assign(static_cast<std::size_t>(d1) * d1 * d1, 0);
  t.valencies.resize(d1);
  for (int i = 0; i < d1; ++i) t.valencies[i] = static_cast<int>(classes[i].size());
  for (int k = 0; k < d1; ++k) {
    const int beta = classes[k].front();
    for (int gamma = 0; gamma < g.order; ++gamma)
      ++t.at(k, class_of[gamma], class_of[g.at(beta, g.inv[gamma])]);
    if (classes[k].size() > 1) {
      const int beta2 = classes[k][1];
      std::vector<int> recount(static_cast<std::size_t>(d1) * d1, 0);
      for (int gamma = 0; gamma < g.order; ++gamma)
        ++recount[static_cast<std::size_t>(class_of[gamma]) * d1 +
                  class_of[g.at(beta2, g.inv[gamma])]];
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j)
          if (recount[static_cast<std::size_t>(i) * d1 + j] != t.at(k, i, j))
            throw NumericalFailure("intersection numbers depend on the representative");
    }
  }
  return t;
}

}  // namespace detail

inline IntersectionTensor intersection_numbers(const Group& g, const ClassSet& cs) {
  return detail::count_intersections(g, cs.class_of, cs.classes);
}

struct CharacterTable {
  Eigen::MatrixXcd chi;        // chi(k, i) = chi_k(alpha_i); row 0 trivial
  std::vector<int> degrees;    // d_k = chi_k(identity class)
  std::vector<bool> real_rep;  // row is real-valued
  std::vector<int> conj_pair;  // involution pairing each row with its conjugate

  int rows() const { return static_cast<int>(degrees.size()); }
};

inline CharacterTable character_table(const Group& g, const ClassSet& cs,
                                      const IntersectionTensor& it, std::uint64_t seed) {
  const int d1 = cs.count();
  const int n = g.order;

  // Class matrices acting on class-sum coordinates: (B_i w)_j = sum_k p^k_{ij} w_k.
  std::vector<Eigen::MatrixXd> cls_mat(d1, Eigen::MatrixXd::Zero(d1, d1));
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int k = 0; k < d1; ++k) cls_mat[i](j, k) = it.at(k, i, j);

  std::string seed_trail;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    if (!seed_trail.empty()) seed_trail += ",";
    seed_trail += std::to_string(s);
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> coeff(1.0, 2.0);
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(d1, d1);
    for (int i = 0; i < d1; ++i) combo += coeff(rng) * cls_mat[i];

    Eigen::EigenSolver<Eigen::MatrixXd> es(combo);
    if (es.info() != Eigen::Success) continue;
    Eigen::VectorXcd lam = es.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    bool collision = false;
    for (int a = 0; a < d1 && !collision; ++a)
      for (int b = a + 1; b < d1; ++b)
        if (std::abs(lam(a) - lam(b)) < 1e-7 * scale) { collision = true; break; }
    if (collision) continue;

    // Recover the class-sum eigenvalues omega_{r,i} from each eigenvector.
    Eigen::MatrixXcd omega(d1, d1);  // row r, col i
    bool degenerate = false;
    for (int r = 0; r < d1 && !degenerate; ++r) {
      Eigen::VectorXcd v = es.eigenvectors().col(r);
      int j0 = 0;
      for (int j = 1; j < d1; ++j)
        if (std::abs(v(j)) > std::abs(v(j0))) j0 = j;
      for (int i = 0; i < d1; ++i) {
        Eigen::VectorXcd bi = cls_mat[i].cast<cxd>() * v;
        omega(r, i) = bi(j0) / v(j0);
      }
      if (std::abs(omega(r, 0) - 1.0) > 1e-6) degenerate = true;  // omega_{r,0} = 1
    }
    if (degenerate) continue;

    // Degrees from sum_i |omega_{r,i}|^2 / kappa_i = |G| / d_r^2.
    std::vector<int> deg(d1);
    bool bad_degree = false;
    Eigen::MatrixXcd chi(d1, d1);
    for (int r = 0; r < d1; ++r) {
      double s2 = 0;
      for (int i = 0; i < d1; ++i) s2 += std::norm(omega(r, i)) / it.valencies[i];
      const double draw = std::sqrt(static_cast<double>(n) / s2);
      const double rounded = std::round(draw);
      if (std::abs(draw - rounded) > tol::kIntegerRound || rounded < 1.0) {
        bad_degree = true;
        break;
      }
      deg[r] = static_cast<int>(rounded);
      for (int i = 0; i < d1; ++i)
        chi(r, i) = static_cast<double>(deg[r]) * omega(r, i) / static_cast<double>(it.valencies[i]);
    }
    if (bad_degree) throw NumericalFailure("character degree is not near an integer (seeds " + seed_trail + ")");

    // Sort rows: trivial character first, then (degree, lexicographic of
    // rounded values).
    std::vector<int> idx(d1);
    std::iota(idx.begin(), idx.end(), 0);
    auto rounded_key = [&](int r) {
      std::vector<std::pair<double, double>> key(d1);
      for (int i = 0; i < d1; ++i)
        key[i] = {std::round(chi(r, i).real() * 1e8) / 1e8,
                  std::round(chi(r, i).imag() * 1e8) / 1e8};
      return key;
    };
    std::vector<std::vector<std::pair<double, double>>> keys(d1);
    std::vector<char> trivial(d1);
    for (int r = 0; r < d1; ++r) {
      keys[r] = rounded_key(r);
      bool tr = true;
      for (int i = 0; i < d1 && tr; ++i) tr = std::abs(chi(r, i) - 1.0) < 1e-6;
      trivial[r] = tr;
    }
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (trivial[a] != trivial[b]) return trivial[a] != 0;
      if (deg[a] != deg[b]) return deg[a] < deg[b];
      return keys[a] < keys[b];
    });

    CharacterTable ct;
    ct.chi.resize(d1, d1);
    ct.degrees.resize(d1);
    for (int r = 0; r < d1; ++r) {
      ct.degrees[r] = deg[idx[r]];
      for (int i = 0; i < d1; ++i) ct.chi(r, i) = chi(idx[r], i);
    }

    // Exactness gates; a failure here is treated like a collision and retried.
    long long deg_sq = 0;
    for (int r = 0; r < d1; ++r) deg_sq += static_cast<long long>(ct.degrees[r]) * ct.degrees[r];
    if (deg_sq != n) continue;
    double max_row = 0, max_col = 0;
    for (int r = 0; r < d1; ++r)
      for (int s2 = 0; s2 < d1; ++s2) {
        cxd acc = 0;
        for (int i = 0; i < d1; ++i)
          acc += static_cast<double>(it.valencies[i]) * ct.chi(r, i) * std::conj(ct.chi(s2, i));
        max_row = std::max(max_row, std::abs(acc - (r == s2 ? cxd(n) : cxd(0))));
      }
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) {
        cxd acc = 0;
        for (int r = 0; r < d1; ++r) acc += ct.chi(r, i) * std::conj(ct.chi(r, j));
        const cxd want = i == j ? cxd(static_cast<double>(n) / it.valencies[i]) : cxd(0);
        max_col = std::max(max_col, std::abs(acc - want));
      }
    if (max_row > tol::kOrthogonality || max_col > tol::kOrthogonality) continue;

    // Conjugate-row pairing.
    ct.conj_pair.assign(d1, -1);
    ct.real_rep.assign(d1, false);
    for (int r = 0; r < d1; ++r) {
      for (int s2 = 0; s2 < d1; ++s2) {
        double dmax = 0;
        for (int i = 0; i < d1; ++i)
          dmax = std::max(dmax, std::abs(ct.chi(r, i) - std::conj(ct.chi(s2, i))));
        if (dmax < 1e-6) {
          ct.conj_pair[r] = s2;
          break;
        }
      }
      if (ct.conj_pair[r] < 0)
        throw NumericalFailure("no conjugate row found for character row " + std::to_string(r));
      ct.real_rep[r] = ct.conj_pair[r] == r;
    }
    for (int r = 0; r < d1; ++r)
      if (ct.conj_pair[ct.conj_pair[r]] != r)
        throw NumericalFailure("conjugate pairing is not an involution");
    return ct;
  }
  throw DegeneracyFailure("persistent eigenvalue collision; seeds tried: " + seed_trail);
}

/// Independent oracle: the regular character sum_k d_k chi_k(alpha_i)
/// vanishes off the identity class and equals |G| on it.
inline bool regular_character_check(const Group& g, const ClassSet& cs,
                                    const CharacterTable& ct, double tolerance = tol::kOrthogonality) {
  const int d1 = cs.count();
  for (int i = 0; i < d1; ++i) {
    cxd acc = 0;
    for (int r = 0; r < d1; ++r) acc += static_cast<double>(ct.degrees[r]) * ct.chi(r, i);
    const cxd want = i == 0 ? cxd(g.order) : cxd(0);
    if (std::abs(acc - want) > tolerance) return false;
  }
  return true;
}

}  // namespace pstnet
