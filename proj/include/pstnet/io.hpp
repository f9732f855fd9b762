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

// Group-spec grammar, coupling-plan files, CSV traces and plain-text
// exports. All writes are write-then-rename so failures leave no partial
// files; all numbers use 12 significant digits.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pstnet/chartab.hpp"
#include "pstnet/common.hpp"
#include "pstnet/group.hpp"
#include "pstnet/pst.hpp"
#include "pstnet/scheme.hpp"

namespace pstnet {

struct ParsedGroup {
  Group group;
  std::string canonical;  // canonical spec string; hashed into plan files
};

namespace io_detail {

inline int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string("cannot parse ") + what + ": '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace io_detail

struct GroupFile {
  std::string kind;    // cyclic | dihedral | clifford | product | cayley
  std::string param;   // inline parameter for the built-in kinds
  std::vector<std::vector<int>> table;  // cayley only
  std::vector<std::string> labels;
};

/// Group file, key-value:
///   kind cyclic|dihedral|clifford|product|cayley
///   param P                      (built-in kinds; e.g. 8 or cyclic:2,cyclic:2)
///   order N / table <N*N ints> / labels <N tokens>   (kind cayley)
/// '#' starts a comment line. A file without a kind key is read as a plain
/// Cayley table.
inline GroupFile read_group_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open group file: " + path.string());
  GroupFile gf;
  gf.kind = "cayley";
  std::string key;
  int n = -1;
  while (in >> key) {
    if (key[0] == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (key == "kind") {
      if (!(in >> gf.kind)) throw ParseError("bad kind in " + path.string());
    } else if (key == "param") {
      if (!(in >> gf.param)) throw ParseError("bad param in " + path.string());
    } else if (key == "order") {
      if (!(in >> n) || n <= 0) throw ParseError("bad order in " + path.string());
    } else if (key == "table") {
      if (n <= 0) throw ParseError("order must precede table in " + path.string());
      gf.table.assign(n, std::vector<int>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!(in >> gf.table[i][j])) throw ParseError("short table in " + path.string());
    } else if (key == "labels") {
      if (n <= 0) throw ParseError("order must precede labels in " + path.string());
      gf.labels.resize(n);
      for (int i = 0; i < n; ++i)
        if (!(in >> gf.labels[i])) throw ParseError("short labels in " + path.string());
    } else {
      throw ParseError("unknown key '" + key + "' in " + path.string());
    }
  }
  if (gf.kind == "cayley" && gf.table.empty())
    throw ParseError("no table in " + path.string());
  return gf;
}

/// Grammar: cyclic:N | dihedral:N | clifford:N |
///          product:SPEC,SPEC[,SPEC...] (factors must not be products) |
///          @FILE (Cayley table).
inline ParsedGroup parse_group_spec(const std::string& spec, int max_order = kDefaultMaxOrder) {
  auto canonical_cayley = [](const std::vector<std::vector<int>>& t) {
    std::string s = "cayley:" + std::to_string(t.size()) + ":";
    for (const auto& row : t)
      for (int v : row) {
        s += std::to_string(v);
        s += ',';
      }
    s.pop_back();
    return s;
  };

  if (!spec.empty() && spec[0] == '@') {
    GroupFile gf = read_group_file(spec.substr(1));
    if (gf.kind == "cayley") {
      ParsedGroup pg;
      pg.canonical = canonical_cayley(gf.table);
      pg.group = from_cayley_table(gf.table, gf.labels);
      if (pg.group.order > max_order) throw SizeLimit("group exceeds the order limit");
      return pg;
    }
    if (gf.param.empty())
      throw ParseError("group file with kind " + gf.kind + " needs a param key");
    return parse_group_spec(gf.kind + ":" + gf.param, max_order);
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ParseError("group spec needs kind:params, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string params = spec.substr(colon + 1);
  ParsedGroup pg;
  if (kind == "cyclic") {
    const int n = io_detail::parse_int(params, "cyclic order");
    if (n > max_order) throw SizeLimit("group exceeds the order limit");
    pg.group = make_cyclic(n);
    pg.canonical = "cyclic:" + std::to_string(n);
  } else if (kind == "dihedral") {
    const int n = io_detail::parse_int(params, "dihedral order");
    if (n > max_order) throw SizeLimit("group exceeds the order limit");
    pg.group = make_dihedral(n);
    pg.canonical = "dihedral:" + std::to_string(n);
  } else if (kind == "clifford") {
    const int n = io_detail::parse_int(params, "clifford index");
    if (n >= 0 && n < 31 && (1ll << (n + 1)) > max_order)
      throw SizeLimit("group exceeds the order limit");
    pg.group = make_clifford(n);
    pg.canonical = "clifford:" + std::to_string(n);
  } else if (kind == "product") {
    const auto parts = io_detail::split(params, ',');
    if (parts.size() < 2) throw ParseError("product needs at least two factors");
    std::vector<ParsedGroup> factors;
    for (const auto& part : parts) {
      if (part.rfind("product:", 0) == 0)
        throw ParseError("nested products are not supported; list all factors");
      factors.push_back(parse_group_spec(part, max_order));
    }
    pg.group = factors[0].group;
    for (std::size_t i = 1; i < factors.size(); ++i)
      pg.group = direct_product(pg.group, factors[i].group, max_order);
    pg.canonical = "product:";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) pg.canonical += ',';
      pg.canonical += factors[i].canonical;
    }
  } else {
    throw ParseError("unknown group kind '" + kind + "'");
  }
  return pg;
}

inline std::string group_hash_hex(const std::string& canonical) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

// --- coupling-plan file ----------------------------------------------------

inline std::string plan_to_text(const CouplingPlan& plan, const std::string& group_canonical,
                                std::uint64_t seed) {
  std::ostringstream os;
  os << "pstnet-plan 1\n";
  os << "group " << group_canonical << "\n";
  os << "group-hash " << group_hash_hex(group_canonical) << "\n";
  os << "seed " << seed << "\n";
  os << "convention " << (plan.form == HamiltonianForm::amplitude ? "amplitude" : "physical")
     << "\n";
  os << "target-class " << plan.target_class << "\n";
  os << "t0 " << fmt12(plan.t0) << "\n";
  os << "phi-over-pi " << fmt12(plan.phi / kPi) << "\n";
  os << "classes " << plan.couplings.size() << "\n";
  os << "couplings";
  for (double j : plan.couplings) os << " " << fmt12(j);
  os << "\n";
  os << "winding";
  for (int l : plan.winding) os << " " << l;
  os << "\n";
  os << "phase-targets-over-pi";
  for (double th : plan.phase_targets) os << " " << fmt12(th / kPi);
  os << "\n";
  return os.str();
}

struct PlanFile {
  CouplingPlan plan;
  std::string group_canonical;
  std::string group_hash;
  std::uint64_t seed = 0;
};

inline PlanFile read_plan_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open plan file: " + path.string());
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "pstnet-plan" || version != 1)
    throw ParseError("not a pstnet plan file: " + path.string());
  PlanFile pf;
  std::string key;
  int classes = -1;
  while (in >> key) {
    if (key == "group") {
      in >> pf.group_canonical;
    } else if (key == "group-hash") {
      in >> pf.group_hash;
    } else if (key == "seed") {
      in >> pf.seed;
    } else if (key == "convention") {
      std::string c;
      in >> c;
      if (c == "amplitude")
        pf.plan.form = HamiltonianForm::amplitude;
      else if (c == "physical")
        pf.plan.form = HamiltonianForm::physical;
      else
        throw ParseError("unknown convention '" + c + "'");
    } else if (key == "target-class") {
      in >> pf.plan.target_class;
    } else if (key == "t0") {
      in >> pf.plan.t0;
    } else if (key == "phi-over-pi") {
      double v;
      in >> v;
      pf.plan.phi = v * kPi;
    } else if (key == "classes") {
      in >> classes;
      if (classes <= 0) throw ParseError("bad class count in plan");
    } else if (key == "couplings") {
      if (classes < 0) throw ParseError("classes must precede couplings");
      pf.plan.couplings.resize(classes);
      for (auto& j : pf.plan.couplings)
        if (!(in >> j)) throw ParseError("short couplings in plan");
    } else if (key == "winding") {
      if (classes < 0) throw ParseError("classes must precede winding");
      pf.plan.winding.resize(classes);
      for (auto& l : pf.plan.winding)
        if (!(in >> l)) throw ParseError("short winding in plan");
    } else if (key == "phase-targets-over-pi") {
      if (classes < 0) throw ParseError("classes must precede phase targets");
      pf.plan.phase_targets.resize(classes);
      for (auto& th : pf.plan.phase_targets) {
        if (!(in >> th)) throw ParseError("short phase targets in plan");
        th *= kPi;
      }
    } else {
      throw ParseError("unknown key '" + key + "' in plan file");
    }
    if (!in) throw ParseError("malformed plan file: " + path.string());
  }
  if (pf.plan.couplings.empty()) throw ParseError("plan file has no couplings");
  return pf;
}

// --- exports ----------------------------------------------------------------

inline std::string trace_to_csv(const TransferReport& rep, std::uint64_t seed) {
  std::ostringstream os;
  os << "# seed " << seed << "\n";
  os << "t,re_f,im_f,prob\n";
  for (const auto& [t, f] : rep.trace)
    os << fmt12(t) << "," << fmt12(f.real()) << "," << fmt12(f.imag()) << ","
       << fmt12(std::norm(f)) << "\n";
  return os.str();
}

/// Character table as structured text: class representatives, sizes, then
/// one row per irreducible with complex entries as (re, im) pairs.
inline std::string character_table_to_text(const Group& g, const ClassSet& cs,
                                           const CharacterTable& ct) {
  std::ostringstream os;
  os << "classes " << cs.count() << "\n";
  os << "representatives";
  for (int r : cs.representatives) os << " " << g.labels[r];
  os << "\nsizes";
  for (int s : cs.sizes) os << " " << s;
  os << "\n";
  for (int r = 0; r < ct.rows(); ++r) {
    os << "chi_" << r << " degree " << ct.degrees[r] << " :";
    for (int i = 0; i < cs.count(); ++i) os << " " << fmt12(ct.chi(r, i));
    os << "\n";
  }
  return os.str();
}

/// Scheme summary: valencies, multiplicities, P and Q row by row.
inline std::string scheme_summary_to_text(const GroupScheme& s) {
  std::ostringstream os;
  os << "vertices " << s.group.order << "\n";
  os << "classes " << s.cls_count() << "\n";
  os << "symmetric " << (s.symmetric ? 1 : 0) << "\n";
  os << "valencies";
  for (int k : s.valencies) os << " " << k;
  os << "\nmultiplicities";
  for (int m : s.multiplicities) os << " " << m;
  os << "\n";
  for (int k = 0; k < s.cls_count(); ++k) {
    os << "P_" << k << " :";
    for (int i = 0; i < s.cls_count(); ++i) os << " " << fmt12(s.P(k, i));
    os << "\n";
  }
  for (int i = 0; i < s.cls_count(); ++i) {
    os << "Q_" << i << " :";
    for (int k = 0; k < s.cls_count(); ++k) os << " " << fmt12(s.Q(i, k));
    os << "\n";
  }
  return os.str();
}

/// Plain-text graph: a vertex list then one edge per line.
inline std::string graph_to_text(const GraphExport& ge) {
  std::ostringstream os;
  os << "graph relation " << ge.relation << (ge.directed ? " directed" : " undirected")
     << (ge.degenerate ? " degenerate" : "") << "\n";
  os << "vertices " << ge.vertices << "\n";
  for (int v = 0; v < ge.vertices; ++v) os << v << " " << ge.labels[v] << "\n";
  os << "edges " << ge.edges.size() << "\n";
  for (const auto& [a, b] : ge.edges) os << a << " " << b << "\n";
  return os.str();
}

}  // namespace pstnet
