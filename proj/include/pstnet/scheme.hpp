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

// The group association scheme: relations R_i = {(x,y) : y x^-1 in C_i},
// adjacency matrices, primitive idempotents, eigenvalue matrices P and Q,
// stratification, and symmetrization of non-symmetric schemes by merging
// each class with its inverse class (and each character row with its
// conjugate row).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "pstnet/chartab.hpp"
#include "pstnet/common.hpp"
#include "pstnet/group.hpp"

namespace pstnet {

struct GroupScheme {
  Group group;

  // Scheme classes; equal to the conjugacy classes for a raw scheme,
  // unions C_i u C_i^-1 after symmetrization. Ordered by smallest member.
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;
  std::vector<int> valencies;
  std::vector<int> representatives;
  std::vector<int> inverse_class;
  std::vector<bool> class_is_real;
  bool symmetric = false;
  int real_class_count = 0;  // R: classes with C_i = C_i^-1 before merging

  IntersectionTensor tensor;  // intersection numbers of THIS scheme
  CharacterTable table;       // raw group character table

  // Spectral data. Row k of P / column k of Q corresponds to one primitive
  // idempotent; after symmetrization a row may stand for a merged pair of
  // conjugate representations (row_reps tracks the raw table rows).
  Eigen::MatrixXcd P;  // P(k, i): eigenvalue of A_i on E_k
  Eigen::MatrixXcd Q;  // Q(i, k): N * coefficient of A_i in E_k
  std::vector<int> multiplicities;            // m_k = trace E_k
  std::vector<std::array<int, 2>> row_reps;   // {r, conj r} raw rows per scheme row

  int vertex_count() const { return group.order; }
  int cls_count() const { return static_cast<int>(classes.size()); }
  int diameter() const { return cls_count() - 1; }

  Eigen::MatrixXi adjacency(int i) const {
    const int n = group.order;
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (class_of[group.at(y, group.inv[x])] == i) a(x, y) = 1;
    return a;
  }

  // E_k = (1/N) sum_j Q(j, k) A_j; entrywise (d_k/|G|) conj chi_k(y x^-1).
  Eigen::MatrixXcd idempotent(int k) const {
    const int n = group.order;
    Eigen::MatrixXcd e(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        e(x, y) = Q(class_of[group.at(y, group.inv[x])], k) / static_cast<double>(n);
    return e;
  }
};

inline GroupScheme build_scheme(const Group& g, const ClassSet& cs,
                                const IntersectionTensor& it, const CharacterTable& ct) {
  GroupScheme s;
  s.group = g;
  s.classes = cs.classes;
  s.class_of = cs.class_of;
  s.valencies = cs.sizes;
  s.representatives = cs.representatives;
  s.inverse_class = cs.inverse_class;
  s.tensor = it;
  s.table = ct;
  const int d1 = cs.count();
  s.class_is_real.resize(d1);
  s.real_class_count = 0;
  for (int i = 0; i < d1; ++i) {
    s.class_is_real[i] = cs.inverse_class[i] == i;
    if (s.class_is_real[i]) ++s.real_class_count;
  }
  s.symmetric = s.real_class_count == d1;
  s.P.resize(d1, d1);
  s.Q.resize(d1, d1);
  s.multiplicities.resize(d1);
  s.row_reps.resize(d1);
  for (int k = 0; k < d1; ++k) {
    s.row_reps[k] = {k, ct.conj_pair[k]};
    s.multiplicities[k] = ct.degrees[k] * ct.degrees[k];
    for (int i = 0; i < d1; ++i) {
      s.P(k, i) = static_cast<double>(cs.sizes[i]) * ct.chi(k, i) /
                  static_cast<double>(ct.degrees[k]);
      s.Q(i, k) = static_cast<double>(ct.degrees[k]) * std::conj(ct.chi(k, i));
    }
  }
  return s;
}

inline GroupScheme build_scheme(const Group& g, std::uint64_t seed = 0x5eedULL) {
  ClassSet cs = conjugacy_classes(g);
  IntersectionTensor it = intersection_numbers(g, cs);
  CharacterTable ct = character_table(g, cs, it, seed);
  return build_scheme(g, cs, it, ct);
}

/// Merge each non-real class with its inverse class and each complex
/// character row with its conjugate row. Returns the input unchanged when
/// already symmetric. The result is a symmetric scheme with
/// real_class_count unmerged classes and (d+1-R)/2 merged ones.
inline GroupScheme symmetrize(const GroupScheme& s) {
  if (s.symmetric) return s;
  GroupScheme m;
  m.group = s.group;
  m.table = s.table;
  m.real_class_count = s.real_class_count;

  const int d1 = s.cls_count();
  std::vector<std::vector<int>> member_of;  // constituent raw class ids per merged class
  for (int i = 0; i < d1; ++i) {
    const int j = s.inverse_class[i];
    if (j == i) {
      member_of.push_back({i});
    } else if (i < j) {
      member_of.push_back({i, j});
    }
  }
  const int md = static_cast<int>(member_of.size());
  m.classes.resize(md);
  m.class_of.assign(s.group.order, -1);
  for (int i = 0; i < md; ++i) {
    for (int raw : member_of[i])
      m.classes[i].insert(m.classes[i].end(), s.classes[raw].begin(), s.classes[raw].end());
    std::sort(m.classes[i].begin(), m.classes[i].end());
    for (int v : m.classes[i]) m.class_of[v] = i;
  }
  m.valencies.resize(md);
  m.representatives.resize(md);
  m.inverse_class.resize(md);
  m.class_is_real.assign(md, true);
  for (int i = 0; i < md; ++i) {
    m.valencies[i] = static_cast<int>(m.classes[i].size());
    m.representatives[i] = m.classes[i].front();
    m.inverse_class[i] = i;
  }
  m.symmetric = true;
  m.tensor = detail::count_intersections(m.group, m.class_of, m.classes);

  // Merge conjugate representation rows in the same pattern.
  std::vector<std::array<int, 2>> rows;
  for (int r = 0; r < d1; ++r) {
    const int c = s.table.conj_pair[r];
    if (c == r)
      rows.push_back({r, r});
    else if (r < c)
      rows.push_back({r, c});
  }
  const int mr = static_cast<int>(rows.size());
  if (mr != md)
    throw NumericalFailure("merged row/class counts disagree");
  m.row_reps = rows;
  m.P.resize(md, md);
  m.Q.resize(md, md);
  m.multiplicities.resize(md);
  for (int k = 0; k < md; ++k) {
    const auto [r1, r2] = rows[k];
    m.multiplicities[k] = s.table.degrees[r1] * s.table.degrees[r1] +
                          (r2 != r1 ? s.table.degrees[r2] * s.table.degrees[r2] : 0);
    for (int i = 0; i < md; ++i) {
      cxd p = 0;
      for (int raw : member_of[i]) p += s.P(r1, raw);  // values agree within the pair
      m.P(k, i) = p;
      cxd q = s.Q(member_of[i].front(), r1);
      if (r2 != r1) q += s.Q(member_of[i].front(), r2);
      m.Q(i, k) = q;
    }
  }
  return m;
}

struct Stratification {
  int reference = 0;
  std::vector<std::vector<int>> strata;  // Gamma_i(o)
  Eigen::MatrixXcd phi;                  // column i = |phi_i>
};

inline Stratification stratify(const GroupScheme& s, int o) {
  const int n = s.group.order;
  if (o < 0 || o >= n) throw InvalidParameter("reference vertex out of range");
  const int d1 = s.cls_count();
  Stratification st;
  st.reference = o;
  st.strata.resize(d1);
  for (int beta = 0; beta < n; ++beta)
    st.strata[s.class_of[s.group.at(beta, s.group.inv[o])]].push_back(beta);
  st.phi = Eigen::MatrixXcd::Zero(n, d1);
  for (int i = 0; i < d1; ++i) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(st.strata[i].size()));
    for (int beta : st.strata[i]) st.phi(beta, i) = norm;
  }
  // A_i |phi_0> = sqrt(kappa_i) |phi_i>
  for (int i = 0; i < d1; ++i) {
    Eigen::VectorXcd lhs = s.adjacency(i).cast<cxd>() * st.phi.col(0);
    Eigen::VectorXcd rhs = std::sqrt(static_cast<double>(s.valencies[i])) * st.phi.col(i);
    if ((lhs - rhs).cwiseAbs().maxCoeff() > tol::kStratum)
      throw NumericalFailure("stratum unit vector relation violated");
  }
  return st;
}

/// Residuals for every Bose-Mesner invariant. Failures show up as large
/// residuals rather than exceptions.
struct BoseMesnerReport {
  double identity_residual = 0;       // A_0 = I
  double partition_residual = 0;      // sum_i A_i = J
  double row_sum_residual = 0;        // row/column sums = kappa_i
  double transpose_residual = 0;      // A_i symmetric (symmetric schemes)
  double algebra_residual = 0;        // A_i A_j = sum_k p^k_ij A_k (integer-exact)
  double idempotent_residual = 0;     // E_i E_j = delta_ij E_i
  double completeness_residual = 0;   // sum E_i = I
  double e0_residual = 0;             // E_0 = J/N
  double pq_residual = 0;             // PQ = QP = N I
  double eigen_relation_residual = 0; // A_i E_k = P(k,i) E_k
  double multiplicity_residual = 0;   // trace E_k = m_k

  double max_residual() const {
    double m = identity_residual;
    for (double v : {partition_residual, row_sum_residual, transpose_residual,
                     algebra_residual, idempotent_residual, completeness_residual,
                     e0_residual, pq_residual, eigen_relation_residual,
                     multiplicity_residual})
      m = std::max(m, v);
    return m;
  }
  bool pass(double tolerance = tol::kOrthogonality) const { return max_residual() < tolerance; }
};

inline BoseMesnerReport bose_mesner_check(const GroupScheme& s) {
  BoseMesnerReport r;
  const int n = s.group.order;
  const int d1 = s.cls_count();

  std::vector<Eigen::MatrixXi> adj(d1);
  for (int i = 0; i < d1; ++i) adj[i] = s.adjacency(i);

  r.identity_residual = (adj[0] - Eigen::MatrixXi::Identity(n, n)).cwiseAbs().maxCoeff();
  Eigen::MatrixXi sum = Eigen::MatrixXi::Zero(n, n);
  for (const auto& a : adj) sum += a;
  r.partition_residual = (sum - Eigen::MatrixXi::Ones(n, n)).cwiseAbs().maxCoeff();
  for (int i = 0; i < d1; ++i) {
    for (int x = 0; x < n; ++x) {
      r.row_sum_residual = std::max(r.row_sum_residual,
                                    std::abs(double(adj[i].row(x).sum() - s.valencies[i])));
      r.row_sum_residual = std::max(r.row_sum_residual,
                                    std::abs(double(adj[i].col(x).sum() - s.valencies[i])));
    }
    if (s.symmetric)
      r.transpose_residual = std::max(
          r.transpose_residual,
          double((adj[i] - adj[i].transpose()).cwiseAbs().maxCoeff()));
  }
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) {
      Eigen::MatrixXi prod = adj[i] * adj[j];
      for (int k = 0; k < d1; ++k) prod -= s.tensor.at(k, i, j) * adj[k];
      r.algebra_residual = std::max(r.algebra_residual, double(prod.cwiseAbs().maxCoeff()));
    }

  std::vector<Eigen::MatrixXcd> idem(d1);
  for (int k = 0; k < d1; ++k) idem[k] = s.idempotent(k);
  Eigen::MatrixXcd esum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : idem) esum += e;
  r.completeness_residual = (esum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  r.e0_residual =
      (idem[0] - Eigen::MatrixXcd::Constant(n, n, cxd(1.0 / n))).cwiseAbs().maxCoeff();
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) {
      Eigen::MatrixXcd prod = idem[i] * idem[j];
      if (i == j) prod -= idem[i];
      r.idempotent_residual = std::max(r.idempotent_residual, prod.cwiseAbs().maxCoeff());
    }
  Eigen::MatrixXcd pq = s.P * s.Q - cxd(n) * Eigen::MatrixXcd::Identity(d1, d1);
  Eigen::MatrixXcd qp = s.Q * s.P - cxd(n) * Eigen::MatrixXcd::Identity(d1, d1);
  r.pq_residual = std::max(pq.cwiseAbs().maxCoeff(), qp.cwiseAbs().maxCoeff());
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) {
      Eigen::MatrixXcd lhs = adj[i].cast<cxd>() * idem[k] - s.P(k, i) * idem[k];
      r.eigen_relation_residual = std::max(r.eigen_relation_residual, lhs.cwiseAbs().maxCoeff());
    }
  for (int k = 0; k < d1; ++k)
    r.multiplicity_residual = std::max(
        r.multiplicity_residual, std::abs(idem[k].trace() - cxd(s.multiplicities[k])));
  return r;
}

struct GraphExport {
  int vertices = 0;
  std::vector<std::string> labels;
  int relation = 0;
  bool directed = false;
  bool degenerate = false;                 // relation 0: self loops only
  std::vector<std::pair<int, int>> edges;  // each unordered pair once if undirected
};

inline GraphExport export_graph(const GroupScheme& s, int relation) {
  if (relation < 0 || relation > s.diameter())
    throw InvalidParameter("relation index out of range");
  GraphExport ge;
  ge.vertices = s.group.order;
  ge.labels = s.group.labels;
  ge.relation = relation;
  ge.degenerate = relation == 0;
  ge.directed = !s.class_is_real[relation];
  const int n = s.group.order;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (s.class_of[s.group.at(y, s.group.inv[x])] != relation) continue;
      if (!ge.directed && y < x) continue;  // one edge per unordered pair
      ge.edges.emplace_back(x, y);
    }
  return ge;
}

}  // namespace pstnet
