// Acceptance suite: end-to-end criteria with pinned tolerances, one
// pass/fail line each. Exit code = number of failed criteria.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sys/wait.h>

#include "pstnet/fullspace.hpp"
#include "pstnet/io.hpp"
#include "pstnet/pst.hpp"
#include "pstnet/scheme.hpp"
#include "support.hpp"

using namespace pstnet;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Checker {
  std::string details;
  bool ok = true;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      details += (details.empty() ? "" : "; ") + what;
    }
  }
};

void criterion(int number, const std::string& name, double time_limit_s,
               const std::function<void(Checker&)>& body) {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0)
    c.require(elapsed < time_limit_s,
              "runtime " + fmt12(elapsed) + "s exceeds " + fmt12(time_limit_s) + "s");
  if (c.ok) {
    std::printf("[PASS] criterion %d: %s (%.2fs)\n", number, name.c_str(), elapsed);
  } else {
    std::printf("[FAIL] criterion %d: %s (%.2fs) -- %s\n", number, name.c_str(), elapsed,
                c.details.c_str());
    ++g_failures;
  }
}

std::vector<Group> suite_groups() {
  std::vector<Group> groups;
  for (int n = 1; n <= 8; ++n) groups.push_back(make_cyclic(n));
  groups.push_back(make_dihedral(8));
  groups.push_back(make_dihedral(12));
  groups.push_back(make_clifford(3));
  groups.push_back(make_clifford(4));
  groups.push_back(testsupport::t_h_group());
  return groups;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PSTNET_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  // 1. D_8: the published couplings, reproduced and verified, plus a
  //    two-coupling search result.
  criterion(1, "D_8 coupling reproduction", 1.0, [](Checker& c) {
    const double t0 = 1.0;
    GroupScheme s = build_scheme(make_dihedral(8));
    const std::vector<double> published{0.0, kPi / (2 * t0), 0.0, 2 * kPi / t0, 0.0};
    auto [phi, l] = recover_gauge(s, 2, t0, published);
    CouplingPlan plan = synthesize_couplings(s, 2, t0, phi, l);
    for (int k = 0; k < 5; ++k)
      c.require(std::abs(plan.couplings[k] - published[k]) < 1e-9,
                "coupling " + std::to_string(k) + " off");
    TransferReport rep = verify_pst(s, plan, 1e-9);
    c.require(rep.pass && 1.0 - rep.peak_modulus < 1e-9, "no perfect transfer");
    c.require(angle_distance(rep.residual_phase, kPi) < 1e-9, "residual phase is not pi");

    CouplingPlan searched = search_gauge(s, 2, t0, GaugeObjective::min_nonzero);
    int nonzero = 0;
    for (double j : searched.couplings)
      if (std::abs(j) > 1e-9) ++nonzero;
    c.require(nonzero == 2, "search did not find a two-coupling plan");
    c.require(verify_pst(s, searched, 1e-9).pass, "searched plan fails");
  });

  // 2. T_h: symmetrization merges the conjugate class pairs and the search
  //    lands on J_3 = J_5 = pi/(2 t0).
  criterion(2, "T_h two-coupling search", 5.0, [](Checker& c) {
    const double t0 = 1.0;
    GroupScheme raw = build_scheme(testsupport::t_h_group());
    c.require(raw.cls_count() == 8, "T_h should have 8 classes");
    GroupScheme s = symmetrize(raw);
    c.require(s.cls_count() == 6, "symmetrization should leave 6 classes");
    c.require(s.valencies == std::vector<int>{1, 1, 3, 3, 8, 8}, "merged valencies wrong");

    // the unique PST target: the non-identity singleton central class
    int target = -1;
    for (int m = 1; m < s.cls_count(); ++m)
      if (s.valencies[m] == 1) target = m;
    c.require(target == 1, "central singleton class expected at index 1");

    CouplingPlan plan = search_gauge(s, target, t0, GaugeObjective::min_nonzero);
    int nonzero = 0;
    for (double j : plan.couplings)
      if (std::abs(j) > 1e-9) ++nonzero;
    c.require(nonzero == 2, "expected exactly two nonzero couplings");
    c.require(std::abs(plan.couplings[3] - kPi / (2 * t0)) < 1e-9, "J_3 != pi/2t0");
    c.require(std::abs(plan.couplings[5] - kPi / (2 * t0)) < 1e-9, "J_5 != pi/2t0");
    for (int k : {0, 1, 2, 4})
      c.require(std::abs(plan.couplings[k]) < 1e-9, "J_" + std::to_string(k) + " != 0");
    TransferReport rep = verify_pst(s, plan, 1e-9);
    c.require(rep.pass && 1.0 - rep.peak_modulus < 1e-9, "no perfect transfer");
  });

  // 3. Clifford groups: unit fidelity at the central classes.
  criterion(3, "Clifford optimal fidelity", 0, [](Checker& c) {
    GroupScheme cl3 = build_scheme(make_clifford(3));
    c.require(std::abs(optimal_fidelity(cl3, cl3.class_of[1]) - 1.0) < 1e-9,
              "CL(3) at -1");
    c.require(std::abs(optimal_fidelity(cl3, cl3.class_of[14]) - 1.0) < 1e-9,
              "CL(3) at g1g2g3");
    GroupScheme cl4 = build_scheme(make_clifford(4));
    c.require(std::abs(optimal_fidelity(cl4, cl4.class_of[1]) - 1.0) < 1e-9,
              "CL(4) at -1");
  });

  // 4. Hypercube: nearest-neighbor product plan and the 2^8 full-space oracle.
  criterion(4, "Z_2^3 hypercube transfer", 0, [](Checker& c) {
    const double t0 = 1.0;
    GroupScheme z2 = build_scheme(make_cyclic(2));
    CouplingPlan p1 = search_gauge(z2, 1, t0, GaugeObjective::min_nonzero);

    Group g22 = direct_product(make_cyclic(2), make_cyclic(2));
    GroupScheme s22 = build_scheme(g22);
    CouplingPlan p22 = product_plan(s22, z2, p1, z2, p1);
    Group cube = direct_product(g22, make_cyclic(2));
    GroupScheme sc = build_scheme(cube);
    CouplingPlan plan = product_plan(sc, s22, p22, z2, p1);

    c.require(plan.target_class == sc.class_of[7], "target is not 111");
    for (int cls = 0; cls < sc.cls_count(); ++cls) {
      const bool weight1 = cls == 1 || cls == 2 || cls == 4;
      if (weight1)
        c.require(std::abs(plan.couplings[cls]) > 1e-9, "weight-1 coupling missing");
      else
        c.require(std::abs(plan.couplings[cls]) < 1e-9, "non-nearest-neighbor coupling");
    }
    TransferReport rep = verify_pst(sc, plan, 1e-9);
    c.require(rep.pass && 1.0 - rep.peak_modulus < 1e-9, "no perfect transfer");

    FullHamiltonian h = build_full_hamiltonian(sc, plan.to_physical(), 2);
    c.require(h.dimension == 256, "expected a 2^8 space");
    const double amp = std::sqrt(0.5);
    FullTransferReport ft = full_transfer_check(h, amp, amp, 0, 7, t0);
    c.require(ft.leakage < 1e-8, "off-target leakage");
    c.require(ft.beta_error < 1e-8, "transferred amplitude off");
  });

  // 5. Algebra suite across all the named groups.
  criterion(5, "Bose-Mesner algebra suite", 30.0, [](Checker& c) {
    for (Group& g : suite_groups()) {
      const std::string tag = " (order " + std::to_string(g.order) + ")";
      ClassSet cs = conjugacy_classes(g);
      IntersectionTensor it = intersection_numbers(g, cs);
      CharacterTable ct = character_table(g, cs, it, 0x5eed);
      long long sq = 0;
      for (int dk : ct.degrees) sq += static_cast<long long>(dk) * dk;
      c.require(sq == g.order, "sum d_k^2 != |G|" + tag);
      const int d1 = cs.count();
      for (int r = 0; r < d1; ++r)
        for (int s2 = 0; s2 < d1; ++s2) {
          cxd acc = 0;
          for (int i = 0; i < d1; ++i)
            acc += static_cast<double>(cs.sizes[i]) * ct.chi(r, i) * std::conj(ct.chi(s2, i));
          if (std::abs(acc - (r == s2 ? cxd(g.order) : cxd(0))) > 1e-9)
            c.require(false, "character orthogonality" + tag);
        }
      for (GroupScheme s : {build_scheme(g, cs, it, ct),
                            symmetrize(build_scheme(g, cs, it, ct))}) {
        BoseMesnerReport rep = bose_mesner_check(s);
        c.require(rep.algebra_residual == 0.0, "A_iA_j expansion not integral" + tag);
        c.require(rep.pass(1e-9), "Bose-Mesner residual " + fmt12(rep.max_residual()) + tag);
      }
      GroupScheme raw = build_scheme(g, cs, it, ct);
      for (int k = 0; k < raw.cls_count(); ++k)
        c.require(raw.multiplicities[k] == ct.degrees[k] * ct.degrees[k],
                  "m_k != d_k^2" + tag);
    }
  });

  // 6. Oracle equivalence: spectral amplitudes vs the dense exponential, and
  //    the single-excitation restriction vs the scheme formula.
  criterion(6, "restricted-Hamiltonian oracle equivalence", 0, [](Checker& c) {
    std::uint64_t seed = 2026;
    for (Group& g : suite_groups()) {
      if (g.order > 16) continue;
      const std::string tag = " (order " + std::to_string(g.order) + ")";
      GroupScheme s = symmetrize(build_scheme(g));
      CouplingPlan plan = testsupport::arbitrary_plan(s, seed);
      Eigen::MatrixXd h = testsupport::restricted_hamiltonian(s, plan);
      std::mt19937_64 rng(seed++);
      std::uniform_real_distribution<double> u(0.0, 2.0);
      for (int n = 0; n < 20; ++n) {
        const double t = u(rng);
        Eigen::VectorXcd col = testsupport::expm_column(h, t);
        for (int cls = 0; cls < s.cls_count(); ++cls) {
          cxd direct = 0;
          for (int beta : s.classes[cls]) direct += col(beta);
          direct /= std::sqrt(static_cast<double>(s.valencies[cls]));
          if (std::abs(direct - stratum_amplitude(s, plan, t, cls)) > 1e-8)
            c.require(false, "spectral/exponential mismatch" + tag);
        }
      }
      // sector equivalence wherever D^N fits the cap
      CouplingPlan phys = plan.to_physical();
      for (int levels : {2, 3}) {
        long long dim = 1;
        bool fits = true;
        for (int i = 0; i < g.order && fits; ++i) {
          dim *= levels;
          fits = dim <= kDefaultFullSpaceCap;
        }
        if (!fits) {
          bool threw = false;
          try {
            build_full_hamiltonian(s, phys, levels);
          } catch (const SizeLimit&) {
            threw = true;
          }
          c.require(threw, "cap not enforced" + tag);
          continue;
        }
        FullHamiltonian full = build_full_hamiltonian(s, phys, levels);
        c.require(conservation_residual(full) < 1e-10, "conservation violated" + tag);
        Eigen::MatrixXd ref = sector_reference(s, phys, levels);
        for (int nu = 1; nu < levels; ++nu) {
          const double resid =
              (restrict_single_excitation(full, nu) - ref).cwiseAbs().maxCoeff();
          c.require(resid < 1e-10,
                    "sector residual " + fmt12(resid) + " at D=" + std::to_string(levels) + tag);
        }
      }
    }
  });

  // 7. Negative control: trivial centers admit no PST.
  criterion(7, "trivial-center negative control", 0, [](Checker& c) {
    const fs::path dir = fs::temp_directory_path() / "pstnet_acceptance";
    fs::create_directories(dir);
    testsupport::write_a4_file(dir / "a4.grp");
    const int code = run_cli("synthesize --group @" + (dir / "a4.grp").string() + " --out " +
                             dir.string());
    c.require(code == 4, "A_4 synthesis should exit 4, got " + std::to_string(code));

    GroupScheme d6 = build_scheme(make_dihedral(6));
    for (int m = 1; m < d6.cls_count(); ++m) {
      c.require(fidelity_bound(d6, m) < 1.0 - 1e-9, "D_6 fidelity bound not < 1");
      bool threw = false;
      try {
        optimal_fidelity(d6, m);
      } catch (const NoSingletonClass&) {
        threw = true;
      }
      c.require(threw, "non-singleton class must be rejected");
    }
  });

  // 8. Qudit generalization: the restriction is level independent and the
  //    D = 3 fidelity equals the qubit one.
  criterion(8, "D = 3 qudit equality on D_8", 0, [](Checker& c) {
    const double t0 = 1.0;
    GroupScheme s = build_scheme(make_dihedral(8));
    const std::vector<double> published{0.0, kPi / (2 * t0), 0.0, 2 * kPi / t0, 0.0};
    auto [phi, l] = recover_gauge(s, 2, t0, published);
    CouplingPlan plan = synthesize_couplings(s, 2, t0, phi, l);
    CouplingPlan phys = plan.to_physical();

    FullHamiltonian h3 = build_full_hamiltonian(s, phys, 3);
    Eigen::MatrixXd r1 = restrict_single_excitation(h3, 1);
    Eigen::MatrixXd r2 = restrict_single_excitation(h3, 2);
    c.require((r1 - r2).cwiseAbs().maxCoeff() < 1e-10, "restriction depends on the level");

    FullHamiltonian h2 = build_full_hamiltonian(s, phys, 2);
    Eigen::MatrixXd rq = restrict_single_excitation(h2, 1);
    const double f3 = std::abs(testsupport::expm_column(r1, t0)(2));
    const double f2 = std::abs(testsupport::expm_column(rq, t0)(2));
    c.require(std::abs(f3 - f2) < 1e-9, "qudit and qubit fidelities differ");
    c.require(1.0 - f3 < 1e-9, "qudit transfer is not perfect");
  });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
