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

// Coupling synthesis for perfect state transfer, spectral amplitude
// evaluation, fidelity, and gauge search.
//
// Amplitude-form Hamiltonian H' = sum_i J_i A_i. The class amplitude is
//   f_l(t) = sqrt(kappa_l)/N * sum_k exp(-i t (PJ)_k) Q(l, k),
// and PST to a singleton central class m holds iff the phases
// -t0 (PJ)_k + arg Q(m,k) agree modulo 2pi across k.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "pstnet/common.hpp"
#include "pstnet/scheme.hpp"

namespace pstnet {

enum class HamiltonianForm { amplitude, physical };

struct CouplingPlan {
  HamiltonianForm form = HamiltonianForm::amplitude;
  int target_class = -1;
  double t0 = 1.0;
  std::vector<double> couplings;      // J_k per scheme class
  double phi = 0.0;
  std::vector<int> winding;           // integer vector l per scheme row
  std::vector<double> phase_targets;  // theta_k in [0, 2pi) per scheme row

  // Physical-form couplings are half the amplitude-form ones; the
  // remaining difference (Eq-(22)-type identity shift) is a global phase.
  CouplingPlan to_physical() const {
    if (form == HamiltonianForm::physical) return *this;
    CouplingPlan p = *this;
    p.form = HamiltonianForm::physical;
    for (double& j : p.couplings) j *= 0.5;
    return p;
  }
  CouplingPlan to_amplitude() const {
    if (form == HamiltonianForm::amplitude) return *this;
    CouplingPlan p = *this;
    p.form = HamiltonianForm::amplitude;
    for (double& j : p.couplings) j *= 2.0;
    return p;
  }
};

struct TransferReport {
  std::vector<std::pair<double, cxd>> trace;  // (t, f(t)) at the target class
  double peak_modulus = 0;                    // |f(t0)|
  double residual_phase = 0;                  // arg f(t0)
  double fidelity = 0;
  bool pass = false;
  std::vector<double> thetas;                 // (PJ)_k per representation row
  double unitarity_residual = 0;
};

namespace detail {

inline void require_amplitude_form(const CouplingPlan& plan) {
  if (plan.form != HamiltonianForm::amplitude)
    throw InvalidParameter("operation requires an amplitude-form plan");
}

inline void require_symmetric(const GroupScheme& s) {
  if (!s.symmetric)
    throw InvalidParameter("scheme is not symmetric; symmetrize it first");
}

inline bool is_central(const Group& g, int x) {
  for (int y = 0; y < g.order; ++y)
    if (g.at(x, y) != g.at(y, x)) return false;
  return true;
}

inline void require_pst_target(const GroupScheme& s, int m) {
  if (m < 0 || m >= s.cls_count()) throw InvalidParameter("target class out of range");
  if (m == 0 || s.valencies[m] != 1 || !is_central(s.group, s.representatives[m]))
    throw NoPstTarget("class " + std::to_string(m) +
                      " is not a non-identity singleton central class");
}

inline Eigen::MatrixXd real_q(const GroupScheme& s) {
  if (s.Q.imag().cwiseAbs().maxCoeff() > 1e-9)
    throw NumericalFailure("Q is not real on a symmetric scheme");
  return s.Q.real();
}

inline Eigen::MatrixXd real_p(const GroupScheme& s) {
  if (s.P.imag().cwiseAbs().maxCoeff() > 1e-9)
    throw NumericalFailure("P is not real on a symmetric scheme");
  return s.P.real();
}

// Phase target per representation row: the phase of Q(m, k), the
// coefficient that must be aligned in the transfer amplitude. Equals
// eps_k * pi with eps_k in {0,1} whenever the characters at alpha_m are
// real, which covers every admissible target.
inline std::vector<double> phase_targets_for(const GroupScheme& s, int m) {
  const int d1 = s.cls_count();
  std::vector<double> theta(d1);
  for (int k = 0; k < d1; ++k) theta[k] = wrap_angle(std::arg(s.Q(m, k)));
  return theta;
}

}  // namespace detail

/// Theta values (PJ)_k: the spectral phase rates of the plan, one per
/// representation row of the scheme.
inline Eigen::VectorXd coupling_phases(const GroupScheme& s, const CouplingPlan& plan) {
  Eigen::Map<const Eigen::VectorXd> j(plan.couplings.data(), plan.couplings.size());
  Eigen::VectorXcd pj = s.P * j.cast<cxd>();
  return pj.real();
}

/// Class (stratum) amplitude <phi_l| e^{-i H' t} |phi_0>. The scheme must
/// be symmetric: on a directed scheme H' is not Hermitian.
inline cxd stratum_amplitude(const GroupScheme& s, const CouplingPlan& plan, double t, int cls) {
  detail::require_amplitude_form(plan);
  detail::require_symmetric(s);
  if (cls < 0 || cls >= s.cls_count()) throw InvalidParameter("target class out of range");
  Eigen::VectorXd pj = coupling_phases(s, plan);
  cxd acc = 0;
  for (int k = 0; k < s.cls_count(); ++k)
    acc += std::exp(cxd(0, -t * pj(k))) * s.Q(cls, k);
  return acc * std::sqrt(static_cast<double>(s.valencies[cls])) /
         static_cast<double>(s.group.order);
}

/// Vertex amplitude <beta| e^{-i H' t} |phi_0>; the stratum amplitude
/// scaled by 1/sqrt(kappa_l) for beta in class l.
inline cxd vertex_amplitude(const GroupScheme& s, const CouplingPlan& plan, double t, int vertex) {
  if (vertex < 0 || vertex >= s.group.order) throw InvalidParameter("vertex out of range");
  const int cls = s.class_of[vertex];
  return stratum_amplitude(s, plan, t, cls) /
         std::sqrt(static_cast<double>(s.valencies[cls]));
}

/// Optimal coupling constants for the gauge (phi, l):
///   J_k = (1/|G|) sum_i Q(k, i) (theta_i - phi - 2 pi l_i) / t0.
inline CouplingPlan synthesize_couplings(const GroupScheme& s, int m, double t0, double phi,
                                         std::span<const int> winding) {
  detail::require_symmetric(s);
  detail::require_pst_target(s, m);
  if (t0 <= 0) throw InvalidParameter("transfer time must be positive");
  const int d1 = s.cls_count();
  if (static_cast<int>(winding.size()) != d1)
    throw InvalidParameter("winding vector length must equal the class count");

  const std::vector<double> theta = detail::phase_targets_for(s, m);
  Eigen::VectorXd v(d1);
  for (int i = 0; i < d1; ++i) v(i) = (theta[i] - phi - kTwoPi * winding[i]) / t0;
  Eigen::VectorXcd j = s.Q * v.cast<cxd>() / static_cast<double>(s.group.order);
  if (j.imag().cwiseAbs().maxCoeff() >= tol::kCouplingImag)
    throw GaugeInconsistency("synthesized couplings are not real");

  CouplingPlan plan;
  plan.form = HamiltonianForm::amplitude;
  plan.target_class = m;
  plan.t0 = t0;
  plan.phi = phi;
  plan.winding.assign(winding.begin(), winding.end());
  plan.phase_targets = theta;
  plan.couplings.resize(d1);
  for (int k = 0; k < d1; ++k) {
    double jr = j(k).real();
    if (std::abs(jr) < 1e-12) jr = 0.0;  // drop eigensolver noise
    plan.couplings[k] = jr;
  }

  // Phase-matching invariant: t0 (PJ)_k = theta_k - phi (mod 2 pi).
  Eigen::VectorXd pj = coupling_phases(s, plan);
  for (int k = 0; k < d1; ++k)
    if (angle_distance(t0 * pj(k), theta[k] - phi) > tol::kPhaseMatch)
      throw GaugeInconsistency("phase matching violated after synthesis");
  return plan;
}

/// Eq-(25)-style transfer bound (1/|G|) sum_k d_k |chi_k(alpha_m)|,
/// evaluated for any class; equals 1 exactly when alpha_m is central.
inline double fidelity_bound(const GroupScheme& s, int m) {
  if (m < 0 || m >= s.cls_count()) throw InvalidParameter("class index out of range");
  double acc = 0;
  for (int k = 0; k < s.cls_count(); ++k) acc += std::abs(s.Q(m, k));
  return acc / static_cast<double>(s.group.order);
}

/// The optimal fidelity at a singleton class.
inline double optimal_fidelity(const GroupScheme& s, int m) {
  if (m < 0 || m >= s.cls_count()) throw InvalidParameter("class index out of range");
  if (s.valencies[m] != 1)
    throw NoSingletonClass("class " + std::to_string(m) + " has size " +
                           std::to_string(s.valencies[m]));
  return fidelity_bound(s, m);
}

inline TransferReport verify_pst(const GroupScheme& s, const CouplingPlan& plan, double tolerance,
                                 int samples = 201) {
  detail::require_amplitude_form(plan);
  if (tolerance <= 0) throw InvalidParameter("tolerance must be positive");
  if (samples < 2) throw InvalidParameter("need at least two samples");
  TransferReport rep;
  Eigen::VectorXd pj = coupling_phases(s, plan);
  rep.thetas.assign(pj.data(), pj.data() + pj.size());
  const int d1 = s.cls_count();
  for (int n = 0; n < samples; ++n) {
    const double t = plan.t0 * n / (samples - 1);
    double prob = 0;
    cxd target_amp = 0;
    for (int l = 0; l < d1; ++l) {
      cxd f = stratum_amplitude(s, plan, t, l);
      prob += std::norm(f);
      if (l == plan.target_class) target_amp = f;
    }
    rep.unitarity_residual = std::max(rep.unitarity_residual, std::abs(prob - 1.0));
    rep.trace.emplace_back(t, target_amp);
  }
  const cxd f0 = rep.trace.back().second;
  rep.peak_modulus = std::abs(f0);
  rep.residual_phase = std::arg(f0);
  rep.fidelity = rep.peak_modulus;
  rep.pass = 1.0 - rep.peak_modulus < tolerance;
  return rep;
}

enum class GaugeObjective { min_nonzero, min_l1 };

struct GaugeSearchConfig {
  int max_winding = 4;              // |l_i| <= L
  int max_denominator = 8;          // phi in {a pi / b : b <= this}
  double coupling_tol = 1e-9;       // |J_k| below this counts as zero
  long long max_leaves = 200000000; // enumeration budget
};

namespace detail {

inline std::vector<double> phi_grid(int max_den) {
  std::vector<std::pair<long, long>> fr;  // a/b in [0, 2)
  for (long b = 1; b <= max_den; ++b)
    for (long a = 0; a < 2 * b; ++a)
      if (std::gcd(a, b) == 1 || a == 0) {
        if (a == 0 && b != 1) continue;
        fr.emplace_back(a, b);
      }
  std::sort(fr.begin(), fr.end(),
            [](auto x, auto y) { return x.first * y.second < y.first * x.second; });
  std::vector<double> grid;
  for (auto [a, b] : fr) grid.push_back(kPi * static_cast<double>(a) / static_cast<double>(b));
  return grid;
}

// Active couplings must induce a connected network: the union of the
// active classes (k >= 1) has to generate the whole group. Memoized by
// support mask.
class ConnectivityOracle {
 public:
  explicit ConnectivityOracle(const GroupScheme& s) : s_(s) {}

  bool connected(unsigned mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    const int n = s_.group.order;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int c = 1; c < s_.cls_count(); ++c) {
        if (!(mask & (1u << (c - 1)))) continue;
        for (int gels : s_.classes[c]) {
          const int y = s_.group.at(gels, x);
          if (!seen[y]) {
            seen[y] = 1;
            ++count;
            stack.push_back(y);
          }
        }
      }
    }
    const bool ok = count == n;
    memo_[mask] = ok;
    return ok;
  }

 private:
  const GroupScheme& s_;
  std::map<unsigned, bool> memo_;
};

}  // namespace detail

/// Searches phi over rational multiples of pi and l over the integer box,
/// returning the feasible plan minimizing the objective. Feasible means the
/// active couplings form a connected network. min_nonzero ties break on the
/// lexicographic |J| vector, then on enumeration order (phi ascending, l
/// lexicographic); min_l1 minimizes the l1 norm of l with the plain
/// enumeration-order tie-break.
inline CouplingPlan search_gauge(const GroupScheme& s, int m, double t0, GaugeObjective objective,
                                 GaugeSearchConfig cfg = {}) {
  detail::require_symmetric(s);
  detail::require_pst_target(s, m);
  if (t0 <= 0) throw InvalidParameter("transfer time must be positive");
  const int d1 = s.cls_count();
  if (d1 - 1 > 31) throw SizeLimit("too many classes for the gauge search");

  const std::vector<double> grid = detail::phi_grid(cfg.max_denominator);
  const long long span = 2ll * cfg.max_winding + 1;
  long long leaves = 1;
  for (int i = 0; i < d1; ++i) {
    leaves *= span;
    if (leaves > cfg.max_leaves) break;
  }
  if (leaves > cfg.max_leaves || leaves * static_cast<long long>(grid.size()) > cfg.max_leaves)
    throw SizeLimit("gauge search space exceeds the enumeration budget; shrink the box");

  const Eigen::MatrixXd q = detail::real_q(s);
  const std::vector<double> theta = detail::phase_targets_for(s, m);
  const double n = s.group.order;
  Eigen::MatrixXd lcols(d1, d1);  // column i: contribution of l_i = 1
  for (int i = 0; i < d1; ++i) lcols.col(i) = -kTwoPi / (n * t0) * q.col(i);

  detail::ConnectivityOracle oracle(s);
  auto quantize = [&](double x) { return std::llround(std::abs(x) / cfg.coupling_tol); };

  bool found = false;
  double best_phi = 0;
  std::vector<int> best_l;
  long long best_primary = 0;
  std::vector<long long> best_absj;

  for (double phi : grid) {
    Eigen::VectorXd base(d1);
    for (int i = 0; i < d1; ++i) base(i) = (theta[i] - phi) / t0;
    Eigen::VectorXd j0 = q * base / n;

    // DFS over the winding box, keeping partial coupling sums.
    std::vector<Eigen::VectorXd> partial(d1 + 1, Eigen::VectorXd(d1));
    partial[0] = j0;
    std::vector<int> digit(d1, -cfg.max_winding - 1);
    int depth = 0;
    while (depth >= 0) {
      if (digit[depth] < cfg.max_winding) {
        ++digit[depth];
        partial[depth + 1] = partial[depth] + static_cast<double>(digit[depth]) * lcols.col(depth);
        if (depth + 1 < d1) {
          ++depth;
          digit[depth] = -cfg.max_winding - 1;
          continue;
        }
        // Leaf.
        const Eigen::VectorXd& j = partial[d1];
        long long primary;
        if (objective == GaugeObjective::min_nonzero) {
          int cnt = 0;
          for (int k = 0; k < d1; ++k)
            if (std::abs(j(k)) > cfg.coupling_tol) ++cnt;
          primary = cnt;
        } else {
          long long l1 = 0;
          for (int k = 0; k < d1; ++k) l1 += std::abs(digit[k]);
          primary = l1;
        }
        if (found && primary > best_primary) continue;
        std::vector<long long> absj;
        if (objective == GaugeObjective::min_nonzero) {
          absj.resize(d1);
          for (int k = 0; k < d1; ++k) absj[k] = quantize(j(k));
          if (found && primary == best_primary && absj >= best_absj) continue;
        } else if (found && primary == best_primary) {
          continue;  // enumeration order already favors the incumbent
        }
        unsigned mask = 0;
        for (int k = 1; k < d1; ++k)
          if (std::abs(j(k)) > cfg.coupling_tol) mask |= 1u << (k - 1);
        if (!oracle.connected(mask)) continue;
        found = true;
        best_primary = primary;
        best_absj = std::move(absj);
        best_phi = phi;
        best_l.assign(digit.begin(), digit.end());
      } else {
        --depth;
      }
    }
  }
  if (!found)
    throw SearchExhausted("no connected coupling plan in the gauge box; enlarge it");
  return synthesize_couplings(s, m, t0, best_phi, best_l);
}

/// Finds a gauge (phi from the rational grid, integer l) that reproduces
/// the given couplings exactly; the inverse of synthesize_couplings.
inline std::pair<double, std::vector<int>> recover_gauge(const GroupScheme& s, int m, double t0,
                                                         std::span<const double> couplings,
                                                         int max_denominator = 8) {
  detail::require_symmetric(s);
  detail::require_pst_target(s, m);
  const int d1 = s.cls_count();
  if (static_cast<int>(couplings.size()) != d1)
    throw InvalidParameter("coupling vector length must equal the class count");
  const std::vector<double> theta = detail::phase_targets_for(s, m);
  Eigen::Map<const Eigen::VectorXd> j(couplings.data(), couplings.size());
  Eigen::VectorXd pj = (detail::real_p(s) * j).eval();
  for (double phi : detail::phi_grid(max_denominator)) {
    std::vector<int> l(d1);
    bool ok = true;
    for (int k = 0; k < d1 && ok; ++k) {
      const double raw = (theta[k] - phi - t0 * pj(k)) / kTwoPi;
      const double rounded = std::round(raw);
      if (std::abs(raw - rounded) > 1e-9)
        ok = false;
      else
        l[k] = static_cast<int>(rounded);
    }
    if (ok) return {phi, l};
  }
  throw GaugeInconsistency("no gauge on the phase grid reproduces these couplings");
}

/// Plan on a product scheme whose amplitude factorizes as f_1 * f_2.
/// All three schemes must be symmetric (factors may be symmetrized; the
/// product scheme must then be the symmetrization of the product) and the
/// plans must share t0. The coupling of a factor class spreads over every
/// product class its elements land in, which must receive one consistent
/// value each.
inline CouplingPlan product_plan(const GroupScheme& s12, const GroupScheme& s1,
                                 const CouplingPlan& p1, const GroupScheme& s2,
                                 const CouplingPlan& p2) {
  detail::require_amplitude_form(p1);
  detail::require_amplitude_form(p2);
  detail::require_symmetric(s12);
  detail::require_symmetric(s1);
  detail::require_symmetric(s2);
  if (std::abs(p1.t0 - p2.t0) > 1e-12)
    throw IncompatiblePlans("factor plans have different transfer times");
  const int n1 = s1.group.order, n2 = s2.group.order;
  if (s12.group.order != n1 * n2)
    throw IncompatiblePlans("scheme is not the product of the factors");

  const int d12 = s12.cls_count();
  std::vector<double> j(d12, 0.0);
  std::vector<char> assigned(d12, 0);
  // identity classes combine; other factor classes map to disjoint
  // product classes (their elements have an identity component)
  j[0] = p1.couplings[0] + p2.couplings[0];
  assigned[0] = 1;
  auto spread = [&](const GroupScheme& f, const CouplingPlan& p, bool first) {
    for (int i = 1; i < f.cls_count(); ++i)
      for (int x : f.classes[i]) {
        const int cls = s12.class_of[first ? x * n2 : x];
        if (assigned[cls] && std::abs(j[cls] - p.couplings[i]) > 1e-12)
          throw IncompatiblePlans("product scheme does not refine the factor classes");
        j[cls] = p.couplings[i];
        assigned[cls] = 1;
      }
  };
  spread(s1, p1, true);
  spread(s2, p2, false);
  const int m12 = s12.class_of[s1.representatives[p1.target_class] * n2 +
                               s2.representatives[p2.target_class]];

  const double phi12 = wrap_angle(p1.phi + p2.phi);
  const std::vector<double> theta = detail::phase_targets_for(s12, m12);
  CouplingPlan plan;
  {
    CouplingPlan probe;  // winding follows from the couplings and phi
    probe.form = HamiltonianForm::amplitude;
    probe.couplings = j;
    probe.t0 = p1.t0;
    Eigen::VectorXd pj = coupling_phases(s12, probe);
    std::vector<int> l(d12);
    for (int k = 0; k < d12; ++k) {
      const double raw = (theta[k] - phi12 - p1.t0 * pj(k)) / kTwoPi;
      const double rounded = std::round(raw);
      if (std::abs(raw - rounded) > 1e-6)
        throw NumericalFailure("product gauge is not integral");
      l[k] = static_cast<int>(rounded);
    }
    plan = synthesize_couplings(s12, m12, p1.t0, phi12, l);
  }
  for (int k = 0; k < d12; ++k)
    if (std::abs(plan.couplings[k] - j[k]) > 1e-9)
      throw NumericalFailure("product couplings disagree with the composed gauge");

  // Factorization check at 10 sampled times.
  for (int n = 0; n < 10; ++n) {
    const double t = p1.t0 * n / 9.0;
    const cxd lhs = stratum_amplitude(s12, plan, t, m12);
    const cxd rhs = stratum_amplitude(s1, p1, t, p1.target_class) *
                    stratum_amplitude(s2, p2, t, p2.target_class);
    if (std::abs(lhs - rhs) > 1e-9)
      throw NumericalFailure("product amplitude does not factorize");
  }
  return plan;
}

}  // namespace pstnet
