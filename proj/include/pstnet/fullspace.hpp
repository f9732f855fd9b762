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

// Brute-force oracle on the full D^N Hilbert space: the exchange
// Hamiltonian H = sum_{l>=1} J_l sum_{(i,j) in R_l} lambda_i . lambda_j
// with generalized Gell-Mann generators (tr lambda_a lambda_b = 2 delta),
// each unordered pair counted once. The diagonal relation l = 0 would only
// add a constant and is omitted.
//
// The two-site coupling is sum_a lambda_a x lambda_a = 2 SWAP - (2/D) I,
// which is real symmetric, so the Hamiltonian is stored as a real matrix.
// Restricted to a single-excitation sector it equals
//   sum_{l>=1} J_l (2 A_l + kappa_l c_D I),  c_D = ((N-2)(D-1) - 2) / D,
// which reduces to the (N-4)/2 qubit constant at D = 2.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <vector>

#include "pstnet/common.hpp"
#include "pstnet/pst.hpp"
#include "pstnet/scheme.hpp"

namespace pstnet {

/// Generalized Gell-Mann matrices of SU(D), normalized to
/// trace(lambda_a lambda_b) = 2 delta_ab. Pauli matrices at D = 2.
inline std::vector<Eigen::MatrixXcd> gell_mann_generators(int levels) {
  if (levels < 2) throw InvalidParameter("need at least two levels");
  std::vector<Eigen::MatrixXcd> gen;
  for (int j = 0; j < levels; ++j)
    for (int k = j + 1; k < levels; ++k) {
      Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(levels, levels);
      sym(j, k) = sym(k, j) = 1.0;
      gen.push_back(sym);
      Eigen::MatrixXcd asym = Eigen::MatrixXcd::Zero(levels, levels);
      asym(j, k) = cxd(0, -1);
      asym(k, j) = cxd(0, 1);
      gen.push_back(asym);
    }
  for (int l = 1; l < levels; ++l) {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(levels, levels);
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int i = 0; i < l; ++i) diag(i, i) = norm;
    diag(l, l) = -l * norm;
    gen.push_back(diag);
  }
  return gen;
}

struct FullHamiltonian {
  int levels = 2;         // D
  int sites = 0;          // N
  long long dimension = 0;  // D^N
  Eigen::MatrixXd matrix;   // Hermitian (real symmetric for exchange couplings)
  CouplingPlan plan;        // physical-form plan the matrix was built from

  long long state_index(int site, int level) const {
    long long idx = level;
    for (int s = 0; s < site; ++s) idx *= levels;
    return idx;  // level * D^site; all other sites at level 0
  }
};

inline FullHamiltonian build_full_hamiltonian(const GroupScheme& s, const CouplingPlan& plan,
                                              int levels,
                                              long long cap = kDefaultFullSpaceCap) {
  if (plan.form != HamiltonianForm::physical)
    throw InvalidParameter("full-space construction takes a physical-form plan");
  detail::require_symmetric(s);
  if (levels < 2) throw InvalidParameter("need at least two levels");
  const int n = s.group.order;
  long long dim = 1;
  for (int i = 0; i < n; ++i) {
    dim *= levels;
    if (dim > cap)
      throw SizeLimit("full Hilbert space dimension exceeds the cap of " + std::to_string(cap));
  }

  // Two-site coupling from the generator list.
  const int d2 = levels * levels;
  Eigen::MatrixXcd pair_op = Eigen::MatrixXcd::Zero(d2, d2);
  for (const auto& g : gell_mann_generators(levels)) {
    Eigen::MatrixXcd kron(d2, d2);
    for (int a = 0; a < levels; ++a)
      for (int b = 0; b < levels; ++b)
        for (int c = 0; c < levels; ++c)
          for (int d = 0; d < levels; ++d)
            kron(a * levels + c, b * levels + d) = g(a, b) * g(c, d);
    pair_op += kron;
  }
  if (pair_op.imag().cwiseAbs().maxCoeff() > 1e-14)
    throw NumericalFailure("exchange coupling is not real");
  const Eigen::MatrixXd t_op = pair_op.real();

  FullHamiltonian h;
  h.levels = levels;
  h.sites = n;
  h.dimension = dim;
  h.plan = plan;
  h.matrix = Eigen::MatrixXd::Zero(dim, dim);

  std::vector<long long> pow(n + 1, 1);
  for (int i = 0; i < n; ++i) pow[i + 1] = pow[i] * levels;

  for (int cls = 1; cls < s.cls_count(); ++cls) {
    const double coupling = plan.couplings[cls];
    if (coupling == 0.0) continue;
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        if (s.class_of[s.group.at(y, s.group.inv[x])] != cls) continue;
        for (long long state = 0; state < dim; ++state) {
          const int vx = static_cast<int>(state / pow[x] % levels);
          const int vy = static_cast<int>(state / pow[y] % levels);
          const long long rest = state - vx * pow[x] - vy * pow[y];
          const int col = vx * levels + vy;
          for (int wx = 0; wx < levels; ++wx)
            for (int wy = 0; wy < levels; ++wy) {
              const double val = t_op(wx * levels + wy, col);
              if (val == 0.0) continue;
              h.matrix(rest + wx * pow[x] + wy * pow[y], state) += coupling * val;
            }
        }
      }
  }
  return h;
}

/// Max-norm of the commutator with the diagonal Cartan generator sums
/// (sigma^z_tot at D = 2), taken over all D-1 Cartan directions.
inline double conservation_residual(const FullHamiltonian& h) {
  const int d = h.levels;
  const auto gens = gell_mann_generators(d);
  std::vector<long long> pow(h.sites + 1, 1);
  for (int i = 0; i < h.sites; ++i) pow[i + 1] = pow[i] * d;
  double worst = 0;
  for (int c = 0; c < d - 1; ++c) {
    const Eigen::MatrixXcd& cartan = gens[gens.size() - (d - 1) + c];
    std::vector<double> weight(h.dimension);
    for (long long s = 0; s < h.dimension; ++s) {
      double w = 0;
      for (int site = 0; site < h.sites; ++site) {
        const int v = static_cast<int>(s / pow[site] % d);
        w += cartan(v, v).real();
      }
      weight[s] = w;
    }
    for (long long a = 0; a < h.dimension; ++a)
      for (long long b = 0; b < h.dimension; ++b) {
        const double v = h.matrix(a, b);
        if (v != 0.0)
          worst = std::max(worst, std::abs(v * (weight[a] - weight[b])));
      }
  }
  return worst;
}

/// H projected onto span{ |nu_i> }, an N x N matrix.
inline Eigen::MatrixXd restrict_single_excitation(const FullHamiltonian& h, int level) {
  if (level < 1 || level >= h.levels) throw InvalidParameter("excitation level out of range");
  Eigen::MatrixXd m(h.sites, h.sites);
  for (int i = 0; i < h.sites; ++i)
    for (int j = 0; j < h.sites; ++j)
      m(i, j) = h.matrix(h.state_index(i, level), h.state_index(j, level));
  return m;
}

/// The scheme-side reference for the restriction:
/// sum_{l>=1} J_l (2 A_l + kappa_l c_D I).
inline Eigen::MatrixXd sector_reference(const GroupScheme& s, const CouplingPlan& plan,
                                        int levels) {
  if (plan.form != HamiltonianForm::physical)
    throw InvalidParameter("sector reference takes a physical-form plan");
  const int n = s.group.order;
  const double c =
      ((n - 2.0) * (levels - 1.0) - 2.0) / static_cast<double>(levels);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int cls = 1; cls < s.cls_count(); ++cls) {
    const double j = plan.couplings[cls];
    if (j == 0.0) continue;
    m += 2.0 * j * s.adjacency(cls).cast<double>();
    m += j * s.valencies[cls] * c * Eigen::MatrixXd::Identity(n, n);
  }
  return m;
}

/// e^{-iHt} |psi> by spectral decomposition of the real symmetric H.
inline Eigen::VectorXcd evolve_full(const FullHamiltonian& h, const Eigen::VectorXcd& psi,
                                    double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");
  Eigen::VectorXcd coeff = es.eigenvectors().transpose().cast<cxd>() * psi;
  for (int i = 0; i < coeff.size(); ++i)
    coeff(i) *= std::exp(cxd(0, -t * es.eigenvalues()(i)));
  return es.eigenvectors().cast<cxd>() * coeff;
}

struct FullTransferReport {
  cxd alpha_out;          // amplitude on |0...0>
  cxd beta_out;           // amplitude on |nu_B>
  double leakage = 0;     // max |amplitude| outside the two target states
  double beta_error = 0;  // | |beta_out| - |beta| |
  double relative_phase = 0;  // arg(beta_out/alpha_out) - arg(beta/alpha)
  bool pass = false;
};

/// Evolves alpha|0...0> + beta|nu_A> for time t0 and checks the state
/// arrived at alpha'|0...0> + beta'|nu_B> with |beta'| = |beta|.
inline FullTransferReport full_transfer_check(const FullHamiltonian& h, cxd alpha, cxd beta,
                                              int source, int target, double t0,
                                              int level = 1) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw InvalidState("input state is not normalized");
  if (source < 0 || source >= h.sites || target < 0 || target >= h.sites)
    throw InvalidParameter("site index out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(h.dimension);
  psi(0) = alpha;
  psi(h.state_index(source, level)) += beta;
  const Eigen::VectorXcd out = evolve_full(h, psi, t0);

  FullTransferReport rep;
  rep.alpha_out = out(0);
  rep.beta_out = out(h.state_index(target, level));
  for (long long i = 0; i < h.dimension; ++i) {
    if (i == 0 || i == h.state_index(target, level)) continue;
    rep.leakage = std::max(rep.leakage, std::abs(out(i)));
  }
  rep.beta_error = std::abs(std::abs(rep.beta_out) - std::abs(beta));
  if (std::abs(alpha) > 0 && std::abs(beta) > 0)
    rep.relative_phase =
        std::arg(rep.beta_out / rep.alpha_out) - std::arg(beta / alpha);
  rep.pass = rep.beta_error < tol::kLeakage && rep.leakage < tol::kLeakage;
  return rep;
}

}  // namespace pstnet
