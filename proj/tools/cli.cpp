#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lp01/executor.hpp"
#include "lp01/session.hpp"
#include "lp01/tree_io.hpp"

namespace lp01::cli {
namespace {

struct Failure {
  int code;
};

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "lp01: cannot read " << path << "\n";
    throw Failure{kUsage};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& path, std::ostream& err) {
  const std::string text = read_file(path, err);
  try {
    Program p = parse_program(text);
    check_levels(p);
    return p;
  } catch (const Error& e) {
    err << path << ":" << e.what() << "\n";
    throw Failure{kUsage};
  }
}

Formula load_goal(const Program& program, const std::string& text, std::ostream& err) {
  try {
    Formula g = parse_goal(text);
    check_levels(program, g);
    return g;
  } catch (const Error& e) {
    err << "goal:" << e.what() << "\n";
    throw Failure{kUsage};
  }
}

ProofTree prove_or_fail(const Program& program, const Formula& goal, const ProverOptions& options,
                        std::ostream& out) {
  ProveResult r = prove(program, goal, options);
  switch (r.status) {
    case ProveStatus::kProved:
      return std::move(*r.tree);
    case ProveStatus::kNotProvable:
      out << "not provable\n";
      throw Failure{kNotProvable};
    case ProveStatus::kDepthExceeded:
      out << "depth exceeded after " << r.steps << " steps\n";
      throw Failure{kDepthExceeded};
  }
  throw Failure{kNotProvable};
}

/// Asks on `err`, reads from `in`, and asks again until it gets a constant.
class ConsoleOracle : public InteractionOracle {
 public:
  ConsoleOracle(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  std::optional<std::string> request_constant(const ReadRequest& request) override {
    for (;;) {
      err_ << "choose a value for " << request.variable << " in " << request.goal << "\n> " << std::flush;
      std::string line;
      if (!std::getline(in_, line)) return std::nullopt;
      const auto first = line.find_first_not_of(" \t\r");
      const auto last = line.find_last_not_of(" \t\r");
      if (first != std::string::npos) line = line.substr(first, last - first + 1);
      if (is_constant_name(line)) return line;
      err_ << "'" << line << "' is not a constant (constants start with a lowercase letter)\n";
    }
  }

  void emit(const ExecEvent& event) override {
    if (event.kind == ExecEvent::Kind::kPrint) {
      out_ << event.text << "\n";
    } else {
      err_ << "  enter node " << event.index << " (" << to_string(event.rule) << ")\n";
    }
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

struct CommonArgs {
  std::string file;
  std::string goal;
  std::uint64_t max_steps = 0;
  bool no_occurs_check = false;

  ProverOptions prover() const {
    ProverOptions po;
    po.max_steps = max_steps != 0 ? max_steps : default_max_steps();
    po.occurs_check = !no_occurs_check;
    return po;
  }
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("file", args.file, "program file")->required();
  sub->add_option("-g,--goal", args.goal, "closed goal formula")->required();
  sub->add_option("--max-steps", args.max_steps, "proof search step limit (default: LP01_MAX_STEPS or 100000)");
  sub->add_flag("--no-occurs-check", args.no_occurs_check, "unify without the occurs check");
}

int report_outcome(const ExecOutcome& outcome, std::size_t unused, std::ostream& out, std::ostream& err) {
  switch (outcome.kind) {
    case ExecOutcome::Kind::kSuccess:
      if (unused > 0) {
        err << "lp01: " << unused << " scripted answer(s) left unused\n";
        out << "aborted\n";
        return kAborted;
      }
      out << "success\n";
      return kOk;
    case ExecOutcome::Kind::kVacuous:
      out << "vacuous success: " << format(*outcome.falsified_instance) << " does not hold\n";
      return kOk;
    case ExecOutcome::Kind::kAborted:
      err << "lp01: " << outcome.reason << "\n";
      out << "aborted\n";
      return kAborted;
  }
  return kAborted;
}

}  // namespace

int main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prover and game runner for level-0/1 definition programs", "lp01"};
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "parse a program and check its levels");
  check->add_option("file", check_file, "program file")->required();

  CommonArgs prove_args;
  std::string tree_out;
  bool listing = false;
  auto* prove_cmd = app.add_subcommand("prove", "search for a proof tree");
  add_common(prove_cmd, prove_args);
  prove_cmd->add_option("--tree", tree_out, "write the proof tree to this file");
  prove_cmd->add_flag("--listing", listing, "print the tree as a post-order list");

  CommonArgs run_args;
  std::string script;
  std::string script_file;
  bool trace = false;
  auto* run_cmd = app.add_subcommand("run", "prove a goal, then play it against the user");
  add_common(run_cmd, run_args);
  run_cmd->add_option("--script", script, "answers for the read requests, separated by commas or spaces");
  run_cmd->add_option("--script-file", script_file, "read the scripted answers from a file");
  run_cmd->add_flag("--trace", trace, "report every node the game enters");

  std::string validate_program;
  std::string validate_tree_file;
  auto* validate_cmd = app.add_subcommand("validate", "check a saved proof tree against its program");
  validate_cmd->add_option("file", validate_program, "program file")->required();
  validate_cmd->add_option("tree", validate_tree_file, "tree file")->required();

  std::string listen = "127.0.0.1:7401";
  bool use_stdio = false;
  auto* serve_cmd = app.add_subcommand("serve", "speak the session protocol");
  serve_cmd->add_option("--listen", listen, "address to listen on (host:port)");
  serve_cmd->add_flag("--stdio", use_stdio, "serve one session on stdin/stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) {
      const Program p = load_program(check_file, err);
      out << "ok: " << p.clauses.size() << " clause" << (p.clauses.size() == 1 ? "" : "s") << "\n";
      return kOk;
    }

    if (*prove_cmd) {
      const Program p = load_program(prove_args.file, err);
      const Formula g = load_goal(p, prove_args.goal, err);
      const ProofTree tree = prove_or_fail(p, g, prove_args.prover(), out);
      out << "proved: " << tree.nodes.size() << " nodes\n";
      if (listing) out << format_listing(tree);
      if (!tree_out.empty()) {
        std::ofstream file(tree_out, std::ios::binary | std::ios::trunc);
        file << serialize_tree(TreeDocument{program_hash(p), tree});
        if (!file.flush()) {
          err << "lp01: cannot write " << tree_out << "\n";
          return kUsage;
        }
      }
      return kOk;
    }

    if (*run_cmd) {
      if (!script.empty() && !script_file.empty()) {
        err << "lp01: --script and --script-file are exclusive\n";
        return kUsage;
      }
      const Program p = load_program(run_args.file, err);
      const Formula g = load_goal(p, run_args.goal, err);
      const ProofTree tree = prove_or_fail(p, g, run_args.prover(), out);
      ExecOptions eo;
      eo.trace = trace;
      if (!script.empty() || !script_file.empty()) {
        const std::string text = script.empty() ? read_file(script_file, err) : script;
        ConsoleOracle printer(in, out, err);
        ScriptedOracle oracle(ScriptedOracle::parse_script(text), [&](const ExecEvent& e) { printer.emit(e); });
        const ExecOutcome outcome = execute(tree, oracle, eo);
        return report_outcome(outcome, oracle.unused(), out, err);
      }
      ConsoleOracle oracle(in, out, err);
      return report_outcome(execute(tree, oracle, eo), 0, out, err);
    }

    if (*validate_cmd) {
      const Program p = load_program(validate_program, err);
      TreeDocument doc;
      try {
        doc = deserialize_tree(read_file(validate_tree_file, err));
      } catch (const TreeFormatError& e) {
        err << validate_tree_file << ": " << e.what() << "\n";
        return kUsage;
      }
      if (doc.program_hash != program_hash(p)) {
        err << validate_tree_file << ": tree was built from a different program\n";
        return kUsage;
      }
      if (auto bad = validate_tree(doc.tree, p)) {
        err << validate_tree_file << ": node " << bad->index << ": " << bad->reason << "\n";
        return kUsage;
      }
      out << "valid: " << doc.tree.nodes.size() << " nodes\n";
      return kOk;
    }

    if (*serve_cmd) {
      SessionOptions so;
      so.max_steps = default_max_steps();
      if (use_stdio) {
        FdChannel channel(0, 1);
        run_session(channel, so);
        return kOk;
      }
      Server server(so);
      server.listen(listen);
      err << "lp01: listening on port " << server.port() << "\n";
      server.serve();
      return kOk;
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const Error& e) {
    err << "lp01: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace lp01::cli
