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

// pstnet CLI: build group -> scheme -> synthesize -> verify -> export.
//
// Exit codes: 0 ok, 1 internal error, 2 parse failure, 3 not a group,
// 4 no PST target, 5 gauge search exhausted, 6 fidelity failure,
// 7 plan/group hash mismatch.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "pstnet/fullspace.hpp"
#include "pstnet/io.hpp"
#include "pstnet/pst.hpp"
#include "pstnet/scheme.hpp"

namespace fs = std::filesystem;
using namespace pstnet;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNotAGroup = 3;
constexpr int kExitNoTarget = 4;
constexpr int kExitSearchExhausted = 5;
constexpr int kExitFidelity = 6;
constexpr int kExitHashMismatch = 7;

struct CommonOpts {
  std::string group_spec;
  std::uint64_t seed = 0x5eed;
  int max_order = kDefaultMaxOrder;
  std::string out_dir;
  double tolerance = 1e-9;
};

std::string phase_over_pi(double radians) { return fmt12(radians / kPi); }

// Non-identity singleton central classes of a symmetric scheme.
std::vector<int> pst_targets(const GroupScheme& s) {
  std::vector<int> out;
  for (int m = 1; m < s.cls_count(); ++m)
    if (s.valencies[m] == 1 && detail::is_central(s.group, s.representatives[m]))
      out.push_back(m);
  return out;
}

int pick_target(const GroupScheme& sym, const std::string& target_opt) {
  if (target_opt == "auto") {
    const auto targets = pst_targets(sym);
    if (targets.empty()) throw NoPstTarget("group has no PST target");
    return targets.front();
  }
  return io_detail::parse_int(target_opt, "target class");
}

std::string coupling_summary(const GroupScheme& s, const CouplingPlan& plan) {
  std::ostringstream os;
  int nonzero = 0;
  for (double j : plan.couplings)
    if (std::abs(j) > 1e-9) ++nonzero;
  os << "couplings";
  for (double j : plan.couplings) os << " " << fmt12(j);
  os << "\nnonzero-couplings " << nonzero << "\n";
  os << "optimal-fidelity " << fmt12(optimal_fidelity(s, plan.target_class)) << "\n";
  os << "phi-over-pi " << phase_over_pi(plan.phi) << "\nwinding";
  for (int l : plan.winding) os << " " << l;
  os << "\n";
  return os.str();
}

int cmd_info(const CommonOpts& opt, int export_relation) {
  ParsedGroup pg = parse_group_spec(opt.group_spec, opt.max_order);
  ClassSet cs = conjugacy_classes(pg.group);
  IntersectionTensor it = intersection_numbers(pg.group, cs);
  CharacterTable ct = character_table(pg.group, cs, it, opt.seed);
  GroupScheme raw = build_scheme(pg.group, cs, it, ct);
  GroupScheme sym = symmetrize(raw);

  std::cout << "group " << pg.canonical << "\n";
  std::cout << "hash " << group_hash_hex(pg.canonical) << "\n";
  std::cout << "seed " << opt.seed << "\n";
  std::cout << "order " << pg.group.order << "\n";
  std::cout << "classes " << cs.count() << "\n";
  for (int i = 0; i < cs.count(); ++i)
    std::cout << "class " << i << " size " << cs.sizes[i] << " rep "
              << pg.group.labels[cs.representatives[i]]
              << (cs.inverse_class[i] == i ? "" : " (conjugate-inverse pair)") << "\n";
  std::cout << "center";
  for (int z : center(pg.group)) std::cout << " " << pg.group.labels[z];
  std::cout << "\n";
  std::cout << "character-table\n" << character_table_to_text(pg.group, cs, ct);

  std::vector<int> central_classes;
  for (int i = 1; i < cs.count(); ++i)
    if (cs.sizes[i] == 1) central_classes.push_back(i);
  std::cout << "central-nonidentity-classes " << central_classes.size() << "\n";
  const auto targets = pst_targets(sym);
  std::cout << "pst-targets-after-symmetrization " << targets.size();
  for (int m : targets)
    std::cout << " " << m << ":" << sym.group.labels[sym.representatives[m]];
  std::cout << "\n";

  if (!opt.out_dir.empty()) {
    atomic_write(fs::path(opt.out_dir) / "chartab.txt",
                 character_table_to_text(pg.group, cs, ct));
    atomic_write(fs::path(opt.out_dir) / "scheme.txt", scheme_summary_to_text(sym));
  }
  if (export_relation >= 0) {
    GraphExport ge = export_graph(raw, export_relation);
    const fs::path p = fs::path(opt.out_dir.empty() ? "." : opt.out_dir) /
                       ("relation_" + std::to_string(export_relation) + ".graph");
    atomic_write(p, graph_to_text(ge));
    std::cout << "graph-written " << p.string() << "\n";
  }
  return 0;
}

int cmd_synthesize(const CommonOpts& opt, const std::string& target_opt, double t0,
                   const std::string& phi_over_pi_opt, const std::string& winding_opt,
                   const std::string& search_opt, int gauge_box, bool compose) {
  ParsedGroup pg = parse_group_spec(opt.group_spec, opt.max_order);
  GroupScheme sym = symmetrize(build_scheme(pg.group, opt.seed));

  CouplingPlan plan;
  if (compose) {
    if (pg.canonical.rfind("product:", 0) != 0)
      throw ParseError("--compose needs a product group spec");
    const auto parts = io_detail::split(pg.canonical.substr(8), ',');
    GaugeObjective obj =
        search_opt == "min-l1" ? GaugeObjective::min_l1 : GaugeObjective::min_nonzero;
    GaugeSearchConfig cfg;
    cfg.max_winding = gauge_box;
    // left fold of per-factor plans
    ParsedGroup acc = parse_group_spec(parts[0], opt.max_order);
    GroupScheme acc_scheme = symmetrize(build_scheme(acc.group, opt.seed));
    const auto t0s = pst_targets(acc_scheme);
    if (t0s.empty()) throw NoPstTarget("factor 0 has no PST target");
    CouplingPlan acc_plan = search_gauge(acc_scheme, t0s.front(), t0, obj, cfg);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      ParsedGroup f = parse_group_spec(parts[i], opt.max_order);
      GroupScheme fs_scheme = symmetrize(build_scheme(f.group, opt.seed));
      const auto ft = pst_targets(fs_scheme);
      if (ft.empty()) throw NoPstTarget("factor " + std::to_string(i) + " has no PST target");
      CouplingPlan fplan = search_gauge(fs_scheme, ft.front(), t0, obj, cfg);
      Group next = direct_product(acc.group, f.group, opt.max_order);
      GroupScheme next_scheme = symmetrize(build_scheme(next, opt.seed));
      acc_plan = product_plan(next_scheme, acc_scheme, acc_plan, fs_scheme, fplan);
      acc.group = std::move(next);
      acc_scheme = std::move(next_scheme);
    }
    sym = std::move(acc_scheme);
    plan = std::move(acc_plan);
  } else {
    const int target = pick_target(sym, target_opt);
    if (!phi_over_pi_opt.empty() || !winding_opt.empty()) {
      if (phi_over_pi_opt.empty() || winding_opt.empty())
        throw ParseError("explicit gauge needs both --phi and --l");
      const double phi = std::stod(phi_over_pi_opt) * kPi;
      std::vector<int> l;
      for (const auto& tok : io_detail::split(winding_opt, ','))
        l.push_back(io_detail::parse_int(tok, "winding entry"));
      plan = synthesize_couplings(sym, target, t0, phi, l);
    } else {
      GaugeObjective obj =
          search_opt == "min-l1" ? GaugeObjective::min_l1 : GaugeObjective::min_nonzero;
      GaugeSearchConfig cfg;
      cfg.max_winding = gauge_box;
      plan = search_gauge(sym, target, t0, obj, cfg);
    }
  }

  const fs::path dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
  atomic_write(dir / "plan.txt", plan_to_text(plan, pg.canonical, opt.seed));
  std::cout << "plan-written " << (dir / "plan.txt").string() << "\n";
  std::cout << "group " << pg.canonical << "\n";
  std::cout << "target-class " << plan.target_class << " ("
            << sym.group.labels[sym.representatives[plan.target_class]] << ")\n";
  std::cout << "t0 " << fmt12(plan.t0) << "\n";
  std::cout << coupling_summary(sym, plan);
  return 0;
}

int cmd_verify(const CommonOpts& opt, const std::string& plan_path, bool oracle, int levels,
               long long cap) {
  PlanFile pf = read_plan_file(plan_path);
  ParsedGroup pg = parse_group_spec(opt.group_spec, opt.max_order);
  if (group_hash_hex(pg.canonical) != pf.group_hash) {
    std::cerr << "plan file was produced for a different group (hash mismatch)\n";
    return kExitHashMismatch;
  }
  GroupScheme raw = build_scheme(pg.group, pf.seed);
  GroupScheme sym = symmetrize(raw);
  const GroupScheme& s =
      static_cast<int>(pf.plan.couplings.size()) == raw.cls_count() && raw.symmetric ? raw : sym;
  if (static_cast<int>(pf.plan.couplings.size()) != s.cls_count())
    throw ParseError("plan class count does not match the scheme");

  CouplingPlan plan = pf.plan.form == HamiltonianForm::physical ? pf.plan.to_amplitude() : pf.plan;
  TransferReport rep = verify_pst(s, plan, opt.tolerance);

  const fs::path dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
  std::ostringstream report;
  report << "group " << pg.canonical << "\n";
  report << "seed " << pf.seed << "\n";
  report << "target-class " << plan.target_class << "\n";
  report << "t0 " << fmt12(plan.t0) << "\n";
  report << "peak-modulus " << fmt12(rep.peak_modulus) << "\n";
  report << "infidelity " << fmt12(1.0 - rep.peak_modulus) << "\n";
  report << "residual-phase-over-pi " << phase_over_pi(rep.residual_phase) << "\n";
  report << "unitarity-residual " << fmt12(rep.unitarity_residual) << "\n";
  report << "theta-over-pi";
  for (double th : rep.thetas) report << " " << phase_over_pi(th);
  report << "\n";
  report << "pass " << (rep.pass ? 1 : 0) << "\n";

  bool oracle_pass = true;
  if (oracle) {
    long long dim = 1;
    bool fits = true;
    for (int i = 0; i < s.group.order && fits; ++i) {
      dim *= levels;
      fits = dim <= cap;
    }
    if (!fits) {
      report << "oracle skipped (dimension exceeds cap " << cap << ")\n";
    } else {
      FullHamiltonian h = build_full_hamiltonian(s, plan.to_physical(), levels, cap);
      const double cons = conservation_residual(h);
      Eigen::MatrixXd restricted = restrict_single_excitation(h, 1);
      const double sector =
          (restricted - sector_reference(s, plan.to_physical(), levels)).cwiseAbs().maxCoeff();
      const double amp = std::sqrt(0.5);
      FullTransferReport ft = full_transfer_check(
          h, amp, amp, 0, s.representatives[plan.target_class], plan.t0);
      report << "oracle-conservation-residual " << fmt12(cons) << "\n";
      report << "oracle-sector-residual " << fmt12(sector) << "\n";
      report << "oracle-alpha-out " << fmt12(ft.alpha_out) << "\n";
      report << "oracle-beta-out " << fmt12(ft.beta_out) << "\n";
      report << "oracle-leakage " << fmt12(ft.leakage) << "\n";
      report << "oracle-beta-error " << fmt12(ft.beta_error) << "\n";
      report << "oracle-relative-phase-over-pi " << phase_over_pi(ft.relative_phase) << "\n";
      oracle_pass = cons < tol::kCommutator && sector < tol::kSector && ft.pass;
      report << "oracle-pass " << (oracle_pass ? 1 : 0) << "\n";
    }
  }

  atomic_write(dir / "trace.csv", trace_to_csv(rep, pf.seed));
  atomic_write(dir / "report.txt", report.str());
  std::cout << report.str();
  std::cout << "trace-written " << (dir / "trace.csv").string() << "\n";
  return rep.pass && oracle_pass ? 0 : kExitFidelity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perfect state transfer over group association schemes"};
  app.require_subcommand(1);

  CommonOpts opt;
  auto add_common = [&](CLI::App* cmd, bool needs_group) {
    auto* g = cmd->add_option("--group", opt.group_spec,
                              "group spec: cyclic:N | dihedral:N | clifford:N | "
                              "product:SPEC,SPEC,... | @cayley-file");
    if (needs_group) g->required();
    cmd->add_option("--seed", opt.seed, "seed for the character-table eigensplit");
    cmd->add_option("--max-order", opt.max_order, "group order limit");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--tol", opt.tolerance, "fidelity tolerance");
  };

  auto* info = app.add_subcommand("info", "group, classes, characters, PST targets");
  int export_relation = -1;
  add_common(info, true);
  info->add_option("--export-graph", export_relation, "write the (V, R_i) edge list");

  auto* synth = app.add_subcommand("synthesize", "synthesize PST couplings");
  std::string target_opt = "auto", phi_opt, winding_opt, search_opt = "min-nonzero";
  double t0 = 1.0;
  int gauge_box = 4;
  bool compose = false;
  add_common(synth, true);
  synth->add_option("--target", target_opt, "target class index or 'auto'");
  synth->add_option("--t0", t0, "transfer time");
  synth->add_option("--phi", phi_opt, "gauge phase, in units of pi (with --l)");
  synth->add_option("--l", winding_opt, "winding integers, comma separated (with --phi)");
  synth->add_option("--search", search_opt, "gauge objective: min-nonzero | min-l1")
      ->check(CLI::IsMember({"min-nonzero", "min-l1"}));
  synth->add_option("--gauge-box", gauge_box, "winding box half-width for the search");
  synth->add_flag("--compose", compose, "compose per-factor plans on a product group");

  auto* verify = app.add_subcommand("verify", "verify a coupling plan");
  std::string plan_path;
  bool oracle = false;
  int levels = 2;
  long long cap = kDefaultFullSpaceCap;
  add_common(verify, true);
  verify->add_option("--plan", plan_path, "coupling-plan file")->required();
  verify->add_flag("--oracle", oracle, "run the full-Hilbert-space oracle");
  verify->add_option("--levels", levels, "qudit level count D for the oracle");
  verify->add_option("--cap", cap, "full-space dimension cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  try {
    if (info->parsed()) return cmd_info(opt, export_relation);
    if (synth->parsed())
      return cmd_synthesize(opt, target_opt, t0, phi_opt, winding_opt, search_opt, gauge_box,
                            compose);
    if (verify->parsed()) return cmd_verify(opt, plan_path, oracle, levels, cap);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const MalformedTable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const NotAGroup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotAGroup;
  } catch (const NoPstTarget& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoTarget;
  } catch (const NoSingletonClass& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoTarget;
  } catch (const SearchExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSearchExhausted;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
