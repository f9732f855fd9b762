// Shared test fixtures: an A_4 Cayley table (identity first, then the three
// double transpositions, then the eight 3-cycles) and small numeric helpers.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "pstnet/pst.hpp"
#include "pstnet/scheme.hpp"

namespace testsupport {

// Even permutations of {0,1,2,3} as images (p[0],p[1],p[2],p[3]).
inline const std::vector<std::array<int, 4>>& a4_permutations() {
  static const std::vector<std::array<int, 4>> perms = [] {
    std::vector<std::array<int, 4>> v;
    v.push_back({0, 1, 2, 3});                    // e
    v.push_back({1, 0, 3, 2});                    // (01)(23)
    v.push_back({2, 3, 0, 1});                    // (02)(13)
    v.push_back({3, 2, 1, 0});                    // (03)(12)
    std::array<int, 4> p = {0, 1, 2, 3};
    std::vector<std::array<int, 4>> rest;
    std::sort(p.begin(), p.end());
    do {
      int inv = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (p[i] > p[j]) ++inv;
      if (inv % 2 == 0 && std::find(v.begin(), v.end(), p) == v.end()) rest.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  }();
  return perms;
}

inline std::vector<std::vector<int>> a4_cayley_table() {
  const auto& perms = a4_permutations();
  const int n = static_cast<int>(perms.size());
  auto compose = [](const std::array<int, 4>& a, const std::array<int, 4>& b) {
    std::array<int, 4> c{};
    for (int i = 0; i < 4; ++i) c[i] = a[b[i]];  // (a*b)(x) = a(b(x))
    return c;
  };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto c = compose(perms[x], perms[y]);
      table[x][y] =
          static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return table;
}

inline pstnet::Group a4_group() { return pstnet::from_cayley_table(a4_cayley_table()); }

inline pstnet::Group t_h_group() {
  return pstnet::direct_product(a4_group(), pstnet::make_cyclic(2));
}

inline void write_a4_file(const std::filesystem::path& path) {
  const auto table = a4_cayley_table();
  std::ofstream out(path);
  out << "order " << table.size() << "\ntable\n";
  for (const auto& row : table) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << "\n";
  }
}

// Deterministic non-PST coupling vector for oracle-equivalence checks.
inline pstnet::CouplingPlan arbitrary_plan(const pstnet::GroupScheme& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pstnet::CouplingPlan plan;
  plan.form = pstnet::HamiltonianForm::amplitude;
  plan.t0 = 1.0;
  plan.target_class = 0;
  plan.couplings.resize(s.cls_count());
  for (auto& j : plan.couplings) j = u(rng);
  return plan;
}

// Restricted amplitude-form Hamiltonian sum_i J_i A_i as a dense matrix.
inline Eigen::MatrixXd restricted_hamiltonian(const pstnet::GroupScheme& s,
                                              const pstnet::CouplingPlan& plan) {
  const int n = s.group.order;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < s.cls_count(); ++i)
    h += plan.couplings[i] * s.adjacency(i).cast<double>();
  return h;
}

// Independent oracle: <target| e^{-iHt} |0> by dense eigendecomposition.
inline Eigen::VectorXcd expm_column(const Eigen::MatrixXd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXcd coeff = es.eigenvectors().row(0).transpose().cast<pstnet::cxd>();
  for (int i = 0; i < coeff.size(); ++i)
    coeff(i) = std::conj(coeff(i)) * std::exp(pstnet::cxd(0, -t * es.eigenvalues()(i)));
  return es.eigenvectors().cast<pstnet::cxd>() * coeff;
}

}  // namespace testsupport
