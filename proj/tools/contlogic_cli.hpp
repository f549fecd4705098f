#pragma once

// Batch front end. Exit status: 0 pass/success, 1 fail/absent, 2 usage or
// input error.

#include <contlogic/contlogic.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace contlogic::cli {

struct RunResult {
  int status = 0;
  std::string out;
  std::string err;
};

namespace detail {

inline Rational parse_rational_flag(const std::string& flag, const std::string& text) {
  auto r = parse_rational(text);
  if (!r) throw Error(ErrorKind::InvalidArgument, flag + " expects INT or INT/INT, got '" + text + "'");
  return *r;
}

inline std::vector<Rational> parse_pool(const std::string& text) {
  std::vector<Rational> pool;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) pool.push_back(parse_rational_flag("--pool", item));
  }
  return pool;
}

struct ProblemFiles {
  std::string family, tv, tw, phi, psi;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--family", family, "family manifest (.cfam)")->required();
    cmd->add_option("--tv", tv, "left side theory (.csnt)");
    cmd->add_option("--tw", tw, "right side theory (.csnt)");
    cmd->add_option("--phi", phi, "left sentence (.csnt)")->required();
    cmd->add_option("--psi", psi, "right sentence (.csnt)")->required();
  }

  InterpolationProblem load() const {
    ModelFamily f = load_family(family);
    const Vocabulary& v = f.vocabulary();
    Theory left = tv.empty() ? Theory{} : load_theory(tv, &v);
    Theory right = tw.empty() ? Theory{} : load_theory(tw, &v);
    Sentence p = load_sentence(phi, &v);
    Sentence q = load_sentence(psi, &v);
    return InterpolationProblem::infer(std::move(f), std::move(left), std::move(right), std::move(p), std::move(q));
  }
};

struct BudgetFlags {
  unsigned max_depth = 1;
  std::size_t max_candidates = 10000;
  std::string pool = "0,1/2,1";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-depth", max_depth, "quantifier depth bound");
    cmd->add_option("--max-candidates", max_candidates, "number of candidates to test");
    cmd->add_option("--pool", pool, "comma-separated constants");
  }

  SearchBudget budget() const { return SearchBudget{max_depth, max_candidates, parse_pool(pool)}; }
};

inline int status_of(const Certificate& c) { return c.passed() ? 0 : 1; }

}  // namespace detail

inline RunResult run(const std::vector<std::string>& args) {
  using namespace detail;
  RunResult result;
  std::ostringstream out;

  CLI::App app{"Continuous first-order logic over finite metric structures", "contlogic"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write the report to this file instead of standard output");

  std::string structure_path, family_path, sentence_path, theory_path, lhs_path, rhs_path, theta_path, rho_path,
      eps_text, s_text, weak_family_path, provider = "search", inputs_path, kind;
  bool pseudo = false;
  std::size_t count = 0;
  ProblemFiles problem_files;
  BudgetFlags budget_flags;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a sentence");
  auto* eval_src = eval_cmd->add_option("--structure", structure_path, "structure (.cstr)");
  eval_cmd->add_option("--family", family_path, "family (.cfam): evaluate in every member")->excludes(eval_src);
  eval_cmd->add_option("--sentence", sentence_path, "sentence (.csnt)")->required();

  auto* check_cmd = app.add_subcommand("check", "validate metric axioms and Lipschitz bounds");
  auto* check_src = check_cmd->add_option("--structure", structure_path, "structure (.cstr)");
  check_cmd->add_option("--family", family_path, "family (.cfam)")->excludes(check_src);
  check_cmd->add_flag("--pseudo", pseudo, "allow d(x,y)=0 for distinct x,y");

  auto* holds_cmd = app.add_subcommand("holds", "models, consistency and entailment over a family");
  holds_cmd->add_option("--family", family_path, "family (.cfam)")->required();
  holds_cmd->add_option("--theory", theory_path, "theory (.csnt)");
  auto* lhs_opt = holds_cmd->add_option("--lhs", lhs_path, "check lhs >= rhs in every model");
  auto* rhs_opt = holds_cmd->add_option("--rhs", rhs_path, "right-hand side");
  lhs_opt->needs(rhs_opt);
  rhs_opt->needs(lhs_opt);

  auto* weak_cmd = app.add_subcommand("weak", "separation sentence 1 -. (rho /. s) from a weak interpolant rho");
  problem_files.add_to(weak_cmd);
  weak_cmd->add_option("--rho", rho_path, "weak interpolant (.csnt)")->required();
  weak_cmd->add_option("--s", s_text, "divisor; defaults to the family-relative bound");

  auto* strong_cmd = app.add_subcommand("strong", "strong interpolant via the dyadic combinator");
  problem_files.add_to(strong_cmd);
  strong_cmd->add_option("--eps", eps_text, "epsilon in (0,1]; rounded down to a power of 1/2")->required();
  auto* wf_opt = strong_cmd->add_option("--weak-family", weak_family_path, "weak family file (level n+1)");
  strong_cmd->add_option("--provider", provider, "search | self")
      ->check(CLI::IsMember({"search", "self"}))
      ->excludes(wf_opt);
  budget_flags.add_to(strong_cmd);

  auto* seq_cmd = app.add_subcommand("sequence", "uniformly convergent interpolant sequences");
  seq_cmd->add_option("kind", kind, "weak | strong")->required()->check(CLI::IsMember({"weak", "strong"}));
  seq_cmd->add_option("--inputs", inputs_path, "rho_m (weak) or gamma_n (strong), one per line")->required();
  seq_cmd->add_option("--count", count, "N: emit theta_0 .. theta_N")->required();
  seq_cmd->add_option("--family", family_path, "check monotonicity and step bounds on this family");

  auto* search_cmd = app.add_subcommand("search", "bounded enumeration search");
  search_cmd->add_option("kind", kind, "weak")->required()->check(CLI::IsMember({"weak"}));
  problem_files.add_to(search_cmd);
  search_cmd->add_option("--eps", eps_text, "epsilon in (0,1]")->required();
  budget_flags.add_to(search_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "check an interpolant certificate");
  verify_cmd->add_option("kind", kind, "weak | strong | separation")
      ->required()
      ->check(CLI::IsMember({"weak", "strong", "separation"}));
  problem_files.add_to(verify_cmd);
  verify_cmd->add_option("--theta", theta_path, "candidate interpolant (.csnt)")->required();
  verify_cmd->add_option("--eps", eps_text, "epsilon in (0,1]");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.out = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.status = 2;
    result.err = std::string("error: ") + e.what() + "\n";
    return result;
  }

  auto require_eps = [&]() {
    Rational eps = parse_rational_flag("--eps", eps_text);
    require_epsilon(eps);
    return eps;
  };

  try {
    if (eval_cmd->parsed()) {
      if (!family_path.empty()) {
        ModelFamily f = load_family(family_path);
        Sentence s = load_sentence(sentence_path, &f.vocabulary());
        for (const auto& m : f.members()) out << m.name() << " " << to_string(evaluate(m, s)) << "\n";
      } else {
        if (structure_path.empty()) throw Error(ErrorKind::InvalidArgument, "eval needs --structure or --family");
        Structure m = load_structure(structure_path);
        Sentence s = load_sentence(sentence_path, &m.vocabulary());
        out << to_string(evaluate(m, s)) << "\n";
      }
    } else if (check_cmd->parsed()) {
      std::vector<Structure> members;
      if (!family_path.empty()) {
        members = load_family(family_path).members();
      } else {
        if (structure_path.empty()) throw Error(ErrorKind::InvalidArgument, "check needs --structure or --family");
        members.push_back(load_structure(structure_path));
      }
      const MetricMode mode = pseudo ? MetricMode::Pseudo : MetricMode::Strict;
      for (const auto& m : members) {
        StructureReport report = check_structure(m, mode);
        if (report.ok()) out << "OK " << m.name() << "\n";
        for (const auto& v : report.violations) out << "VIOLATION " << m.name() << " " << format_violation(v) << "\n";
        if (!report.ok()) result.status = 1;
      }
    } else if (holds_cmd->parsed()) {
      ModelFamily f = load_family(family_path);
      Theory t = theory_path.empty() ? Theory{} : load_theory(theory_path, &f.vocabulary());
      if (!lhs_path.empty()) {
        Clause c = family_entails_ge(f, t, load_sentence(lhs_path, &f.vocabulary()),
                                     load_sentence(rhs_path, &f.vocabulary()));
        out << format_clause(c) << "\n";
        result.status = c.passed() ? 0 : 1;
      } else {
        const auto models = model_indices(f, t);
        for (std::size_t i : models) out << "MODEL " << f.members()[i].name() << "\n";
        out << (models.empty() ? "INCONSISTENT" : "CONSISTENT") << "\n";
        result.status = models.empty() ? 1 : 0;
      }
    } else if (weak_cmd->parsed()) {
      InterpolationProblem p = problem_files.load();
      Sentence rho = load_sentence(rho_path, &p.family.vocabulary());
      Rational s;
      if (!s_text.empty()) {
        s = parse_rational_flag("--s", s_text);
      } else {
        auto bound = separation_bound(p, rho);
        if (!bound) {
          out << "ABSENT rho vanishes on a model of the right side\n";
          result.status = 1;
        } else {
          s = *bound;
        }
      }
      if (result.status == 0) {
        Sentence theta = separation_sentence(rho, s);
        Certificate cert = is_separating(p, theta);
        out << print_sentence(theta) << "\n" << format_certificate(cert);
        result.status = status_of(cert);
      }
    } else if (strong_cmd->parsed()) {
      InterpolationProblem p = problem_files.load();
      const Rational eps = require_eps();
      const DyadicLevel level = DyadicLevel::at_most(eps);
      if (level.epsilon() != eps) out << "# eps rounded down to " << to_string(level.epsilon()) << "\n";
      WeakProvider source;
      if (!weak_family_path.empty()) {
        const std::string text = read_file(weak_family_path);
        source = weak_family_provider(
            with_file_context(weak_family_path, [&] { return parse_weak_family(text, &p.family.vocabulary()); }));
      } else if (provider == "self") {
        source = self_provider(p);
      } else {
        source = search_provider(p, budget_flags.budget());
      }
      StrongResult r = strong_from_weak(p, level.n(), source);
      out << print_sentence(r.theta) << "\n" << format_certificate(r.certificate);
      result.status = status_of(r.certificate);
    } else if (seq_cmd->parsed()) {
      std::optional<ModelFamily> f;
      if (!family_path.empty()) f = load_family(family_path);
      Theory inputs = load_theory(inputs_path, f ? &f->vocabulary() : nullptr);
      const bool weak = kind == "weak";
      std::vector<Sentence> theta =
          weak ? weak_limit_sequence(inputs.sentences(), count) : strong_limit_sequence(inputs.sentences(), count);
      for (const auto& s : theta) out << print_sentence(s) << "\n";
      if (f) {
        auto bounds = weak ? weak_sequence_bounds(count) : strong_sequence_bounds(count);
        Certificate mono = check_monotone(*f, theta);
        Certificate cauchy = check_uniform_cauchy(*f, theta, bounds);
        out << format_certificate(mono) << format_certificate(cauchy);
        result.status = mono.passed() && cauchy.passed() ? 0 : 1;
      }
    } else if (search_cmd->parsed()) {
      InterpolationProblem p = problem_files.load();
      const Rational eps = require_eps();
      SearchOutcome found = search_weak_interpolant_detailed(p, eps, budget_flags.budget());
      if (!found.sentence) {
        out << "ABSENT examined=" << found.examined << "\n";
        result.status = 1;
      } else {
        Certificate cert = is_weak_interpolant(p, *found.sentence, eps);
        out << print_sentence(*found.sentence) << "\n" << format_certificate(cert);
        result.status = status_of(cert);
      }
    } else if (verify_cmd->parsed()) {
      InterpolationProblem p = problem_files.load();
      Sentence theta = load_sentence(theta_path, &p.family.vocabulary());
      Certificate cert;
      if (kind == "separation") {
        cert = is_separating(p, theta);
      } else {
        if (eps_text.empty()) throw Error(ErrorKind::InvalidArgument, "verify " + kind + " needs --eps");
        const Rational eps = require_eps();
        cert = kind == "weak" ? is_weak_interpolant(p, theta, eps) : is_strong_interpolant(p, theta, eps);
      }
      out << format_certificate(cert);
      result.status = status_of(cert);
    }
  } catch (const Error& e) {
    result.status = 2;
    result.err = std::string("error: ") + e.what() + "\n";
    return result;
  }

  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      result.status = 2;
      result.err = "error: cannot write " + out_path + "\n";
      return result;
    }
    file << out.str();
  } else {
    result.out = out.str();
  }
  return result;
}

}  // namespace contlogic::cli
