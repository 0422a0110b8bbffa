#include "lp01/tree_io.hpp"

#include <cstdio>
#include <json.hpp>
#include <set>

namespace lp01 {

using nlohmann::json;

namespace {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class VarCollector {
 public:
  void term(const Term& t) {
    std::vector<Var> vs;
    t.collect_vars(vs);
    for (Var& v : vs) {
      if (v.is_fresh()) vars_.insert(std::move(v));
    }
  }
  void formula(const Formula& f) {
    std::vector<Var> vs;
    f.collect_vars(vs);
    for (Var& v : vs) {
      if (v.is_fresh()) vars_.insert(std::move(v));
    }
  }
  void subst(const Subst& s) {
    for (const auto& [v, t] : s) {
      term(Term::variable(v));
      term(t);
    }
  }
  const std::set<Var>& vars() const { return vars_; }

 private:
  std::set<Var> vars_;
};

json subst_to_json(const Subst& s) {
  json out = json::array();
  for (const auto& [v, t] : s) out.push_back(json::array({v.display(), format(t)}));
  return out;
}

json meta_to_json(const NodeMeta& m) {
  json out = json::object();
  if (m.fresh) out["fresh"] = m.fresh->display();
  if (!m.source_var.empty()) out["source_var"] = m.source_var;
  if (m.witness) out["witness"] = format(*m.witness);
  if (m.clause) out["clause"] = *m.clause;
  if (!m.renaming.empty()) out["renaming"] = subst_to_json(m.renaming);
  if (m.case_info) {
    out["case"] = json{{"clause", m.case_info->clause},
                       {"renaming", subst_to_json(m.case_info->renaming)},
                       {"unifier", subst_to_json(m.case_info->unifier)}};
  }
  if (m.disjunct) out["disjunct"] = *m.disjunct;
  return out;
}

[[noreturn]] void corrupt(const std::string& why) {
  throw TreeFormatError(TreeFormatError::Kind::kCorrupt, "corrupt tree file: " + why);
}

std::optional<VarKind> kind_from_string(std::string_view s) {
  for (VarKind k : {VarKind::kLogic, VarKind::kEigen, VarKind::kBlindEigen}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  TreeDocument read() {
    TreeDocument out;
    const json& hash = field(doc_, "program_hash");
    if (!hash.is_string()) corrupt("program_hash is not a string");
    out.program_hash = hash.get<std::string>();
    read_vars(field(doc_, "vars"));
    const json& nodes = field(doc_, "nodes");
    if (!nodes.is_array() || nodes.empty()) corrupt("nodes must be a non-empty array");
    for (const json& n : nodes) out.tree.nodes.push_back(node(n));
    return out;
  }

 private:
  static const json& field(const json& obj, const char* name) {
    if (!obj.is_object() || !obj.contains(name)) corrupt(std::string("missing field '") + name + "'");
    return obj.at(name);
  }

  static std::string text(const json& j, const char* what) {
    if (!j.is_string()) corrupt(std::string(what) + " is not a string");
    return j.get<std::string>();
  }

  void read_vars(const json& vars) {
    if (!vars.is_array()) corrupt("vars is not an array");
    std::set<std::uint32_t> serials;
    for (const json& v : vars) {
      Var var;
      var.name = text(field(v, "name"), "variable name");
      auto kind = kind_from_string(text(field(v, "kind"), "variable kind"));
      if (!kind) corrupt("unknown variable kind");
      var.kind = *kind;
      const json& serial = field(v, "serial");
      const json& ordinal = field(v, "ordinal");
      if (!serial.is_number_unsigned() || !ordinal.is_number_unsigned()) corrupt("bad variable numbering");
      var.serial = serial.get<std::uint32_t>();
      var.ordinal = ordinal.get<std::uint32_t>();
      if (!serials.insert(var.serial).second) corrupt("duplicate variable serial");
      if (!table_.emplace(var.display(), var).second) corrupt("duplicate variable " + var.display());
    }
  }

  Term term(const json& j) {
    try {
      return parse_term(text(j, "term"), table_);
    } catch (const Error& e) {
      corrupt(std::string("bad term: ") + e.what());
    }
  }

  Formula formula(const json& j) {
    try {
      return parse_formula(text(j, "formula"), table_);
    } catch (const Error& e) {
      corrupt(std::string("bad formula: ") + e.what());
    }
  }

  Subst subst(const json& j) {
    if (!j.is_array()) corrupt("substitution is not an array");
    Subst s;
    for (const json& pair : j) {
      if (!pair.is_array() || pair.size() != 2) corrupt("substitution entry is not a pair");
      Term v = term(pair[0]);
      if (!v.is_var()) corrupt("substitution key is not a variable");
      if (s.binds(v.var())) corrupt("variable bound twice");
      s.insert(v.var(), term(pair[1]));
    }
    return s;
  }

  std::size_t index(const json& j) {
    if (!j.is_number_unsigned()) corrupt("expected a non-negative integer");
    return j.get<std::size_t>();
  }

  ProofNode node(const json& n) {
    ProofNode out;
    auto rule = rule_from_string(text(field(n, "rule"), "rule"));
    if (!rule) corrupt("unknown rule");
    out.rule = *rule;
    out.formula.sigma = subst(field(n, "sigma"));
    if (!out.formula.sigma.is_solved()) corrupt("answer substitution is not in solved form");
    const json& ctx = field(n, "context");
    if (!ctx.is_array()) corrupt("context is not an array");
    for (const json& f : ctx) out.formula.context.push_back(formula(f));
    out.formula.goal = formula(field(n, "goal"));
    const json& ch = field(n, "children");
    if (!ch.is_array()) corrupt("children is not an array");
    for (const json& d : ch) out.children.push_back(index(d));

    const json& m = field(n, "meta");
    if (!m.is_object()) corrupt("meta is not an object");
    if (m.contains("fresh")) {
      Term v = term(m.at("fresh"));
      if (!v.is_var()) corrupt("fresh is not a variable");
      out.meta.fresh = v.var();
    }
    if (m.contains("source_var")) out.meta.source_var = text(m.at("source_var"), "source_var");
    if (m.contains("witness")) out.meta.witness = term(m.at("witness"));
    if (m.contains("clause")) out.meta.clause = index(m.at("clause"));
    if (m.contains("renaming")) out.meta.renaming = subst(m.at("renaming"));
    if (m.contains("case")) {
      const json& c = m.at("case");
      out.meta.case_info = CaseInfo{index(field(c, "clause")), subst(field(c, "renaming")), subst(field(c, "unifier"))};
    }
    if (m.contains("disjunct")) {
      const json& d = m.at("disjunct");
      if (!d.is_number_integer()) corrupt("disjunct is not an integer");
      out.meta.disjunct = d.get<int>();
    }
    return out;
  }

  const json& doc_;
  VarTable table_;
};

}  // namespace

std::string program_hash(const Program& program) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(format(program))));
  return std::string("fnv1a64:") + buf;
}

std::string serialize_tree(const TreeDocument& doc) {
  VarCollector collect;
  json nodes = json::array();
  for (const ProofNode& n : doc.tree.nodes) {
    const ProofFormula& pf = n.formula;
    collect.subst(pf.sigma);
    json ctx = json::array();
    for (const Formula& f : pf.context) {
      collect.formula(f);
      ctx.push_back(format(f));
    }
    collect.formula(pf.goal);
    if (n.meta.fresh) collect.term(Term::variable(*n.meta.fresh));
    if (n.meta.witness) collect.term(*n.meta.witness);
    collect.subst(n.meta.renaming);
    if (n.meta.case_info) {
      collect.subst(n.meta.case_info->renaming);
      collect.subst(n.meta.case_info->unifier);
    }
    nodes.push_back(json{{"rule", to_string(n.rule)},
                         {"sigma", subst_to_json(pf.sigma)},
                         {"context", std::move(ctx)},
                         {"goal", format(pf.goal)},
                         {"children", n.children},
                         {"meta", meta_to_json(n.meta)}});
  }
  json vars = json::array();
  for (const Var& v : collect.vars()) {
    vars.push_back(json{{"name", v.name}, {"serial", v.serial}, {"ordinal", v.ordinal}, {"kind", to_string(v.kind)}});
  }
  json out{{"format", "lp01-proof-tree"},
           {"version", kTreeFormatVersion},
           {"program_hash", doc.program_hash},
           {"vars", std::move(vars)},
           {"nodes", std::move(nodes)}};
  return out.dump(1) + "\n";
}

TreeDocument deserialize_tree(std::string_view bytes) {
  if (bytes.empty()) corrupt("empty input");
  json doc = json::parse(bytes.begin(), bytes.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) corrupt("not valid JSON");
  if (!doc.is_object()) corrupt("top level is not an object");
  if (!doc.contains("format") || doc.at("format") != "lp01-proof-tree") corrupt("not a proof tree document");
  if (!doc.contains("version") || !doc.at("version").is_number_integer()) corrupt("missing version");
  const int version = doc.at("version").get<int>();
  if (version != kTreeFormatVersion) {
    throw TreeFormatError(TreeFormatError::Kind::kVersionMismatch,
                          "tree file version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kTreeFormatVersion) + ")");
  }
  return Reader(doc).read();
}

}  // namespace lp01
