#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"

#include "kbott/error.hpp"
#include "kbott/expr.hpp"
#include "kbott/io.hpp"
#include "kbott/oracle.hpp"

namespace kbott {

namespace detail {

inline bool color_enabled() {
  const char* env = std::getenv("KBOTT_COLOR");
  if (env != nullptr && std::string(env) == "0") return false;
  return isatty(fileno(stderr)) != 0;
}

inline void print_error(const std::string& message) {
  if (color_enabled())
    std::cerr << "\033[31merror:\033[0m " << message << "\n";
  else
    std::cerr << "error: " << message << "\n";
}

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::usage:
      return 2;
    case ErrorKind::budget:
      return 3;
    case ErrorKind::validation:
    case ErrorKind::internal:
      return 1;
  }
  return 1;
}

// Payloads go to stdout by default; -o redirects them to a file and leaves
// a note on stderr.
inline void deliver(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw_usage("cannot write file: " + out_path);
  out << payload;
  std::cerr << "wrote " << out_path << "\n";
}

inline VarId parse_generator_flag(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 >= text.size())
    throw_usage("--generator expects 'j,k', got '" + text + "'");
  try {
    const int j = std::stoi(text.substr(0, comma));
    const int k = std::stoi(text.substr(comma + 1));
    if (j < 1 || k < 1) throw std::invalid_argument("range");
    return VarId{j, k};
  } catch (const std::exception&) {
    throw_usage("--generator expects 'j,k' with positive integers, got '" +
                text + "'");
  }
}

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace detail

inline int run_validate(const std::string& file, bool json_mode) {
  const TowerSpec spec = parse_spec_text(read_text_file(file));
  const Int rank = QuotientRing::rank(spec);
  if (json_mode) {
    json doc;
    doc["ok"] = true;
    doc["stages"] = json::array();
    for (int n : spec.dims) doc["stages"].push_back(n);
    doc["rank"] = rank.str();
    std::cout << detail::dump(doc);
  } else {
    std::cout << "OK: " << spec.stages() << " stage"
              << (spec.stages() == 1 ? "" : "s") << ", rank " << rank.str()
              << "\n";
  }
  return 0;
}

inline int run_present(const std::string& file, bool /*json_mode*/,
                       const std::string& out_path) {
  const TowerSpec spec = parse_spec_text(read_text_file(file));
  detail::deliver(detail::dump(emit_presentation(build_ideal(spec))), out_path);
  return 0;
}

inline int run_reduce(const std::string& file, const std::string& expr,
                      bool json_mode) {
  const TowerSpec spec = parse_spec_text(read_text_file(file));
  const QuotientRing engine(spec);
  const QuotientElement q = engine.reduce(parse_expr(expr, spec));
  const std::string canonical = q.to_polynomial().to_expr_string();
  if (json_mode) {
    json doc;
    doc["expr"] = canonical;
    doc["terms"] = emit_quotient_element(q);
    std::cout << detail::dump(doc);
  } else {
    std::cout << canonical << "\n";
  }
  return 0;
}

inline int run_rank(const std::string& file, bool oracle, std::uint64_t budget,
                    bool json_mode) {
  const TowerSpec spec = parse_spec_text(read_text_file(file));
  const Int rank = QuotientRing::rank(spec);
  if (!oracle) {
    if (json_mode) {
      json doc;
      doc["rank"] = rank.str();
      std::cout << detail::dump(doc);
    } else {
      std::cout << rank.str() << "\n";
    }
    return 0;
  }

  const RankCrossCheck check = cross_check_rank(spec, budget);
  const bool inconclusive =
      check.verdict == RankCrossCheck::Verdict::inconclusive;
  const std::string verdict =
      check.verdict == RankCrossCheck::Verdict::pass
          ? "PASS"
          : (inconclusive ? "INCONCLUSIVE" : "FAIL");
  if (json_mode) {
    json doc;
    doc["rank"] = rank.str();
    if (inconclusive)
      doc["oracle_dimension"] = nullptr;
    else
      doc["oracle_dimension"] = check.dimension.str();
    doc["verdict"] = verdict;
    doc["steps"] = check.steps;
    doc["detail"] = check.detail;
    std::cout << detail::dump(doc);
  } else {
    std::cout << "rank " << rank.str() << "\n";
    std::cout << "oracle "
              << (inconclusive ? std::string("unknown") : check.dimension.str())
              << "\n";
    std::cout << verdict << (check.detail.empty() ? "" : ": " + check.detail)
              << "\n";
  }
  if (check.verdict == RankCrossCheck::Verdict::pass) return 0;
  return inconclusive ? 3 : 1;
}

inline int run_mult_table(const std::string& file, const std::string& generator,
                          bool json_mode) {
  const VarId v = detail::parse_generator_flag(generator);
  const TowerSpec spec = parse_spec_text(read_text_file(file));
  const QuotientRing engine(spec);
  const auto matrix = engine.mult_matrix(v);
  if (json_mode) {
    json doc;
    doc["generator"] = v.json_name();
    doc["size"] = matrix.size();
    doc["rows"] = emit_mult_matrix(matrix);
    std::cout << detail::dump(doc);
  } else {
    for (const auto& row : matrix) {
      std::string line;
      for (const Int& c : row) {
        if (!line.empty()) line += " ";
        line += c.str();
      }
      std::cout << line << "\n";
    }
  }
  return 0;
}

inline int run_from_bs(const std::string& cartan_file,
                       const std::string& word_file, bool /*json_mode*/,
                       const std::string& out_path) {
  const CartanSpec cartan = parse_cartan_text(read_text_file(cartan_file));
  const SubsetSequence seq = parse_word_text(read_text_file(word_file));
  const TowerSpec spec = q_matrices(cartan, seq);
  detail::deliver(detail::dump(emit_spec(spec)), out_path);
  return 0;
}

inline int run_bs_simplify(const std::string& cartan_file,
                           const std::string& word_file, bool /*json_mode*/,
                           const std::string& out_path) {
  const CartanSpec cartan = parse_cartan_text(read_text_file(cartan_file));
  const std::vector<int> word =
      require_singleton_word(parse_word_text(read_text_file(word_file)));
  detail::deliver(
      detail::dump(emit_presentation(bs_simplified_presentation(cartan, word))),
      out_path);
  return 0;
}

inline int run_verify(const std::string& file, std::uint64_t budget, int pairs,
                      std::uint64_t seed, bool json_mode) {
  const TowerSpec spec = parse_spec_text(read_text_file(file));
  InvariantSuiteOptions options;
  options.random_pairs = pairs;
  options.seed = seed;
  const InvariantSuiteReport suite = run_invariant_suite(spec, options);
  const RankCrossCheck oracle = cross_check_rank(spec, budget);

  bool any_fail = !suite.all_pass();
  const std::string oracle_verdict =
      oracle.verdict == RankCrossCheck::Verdict::pass
          ? "PASS"
          : (oracle.verdict == RankCrossCheck::Verdict::fail ? "FAIL"
                                                             : "INCONCLUSIVE");
  if (oracle.verdict == RankCrossCheck::Verdict::fail) any_fail = true;
  const std::string final_verdict =
      any_fail ? "FAIL"
               : (oracle.verdict == RankCrossCheck::Verdict::inconclusive
                      ? "INCONCLUSIVE"
                      : "PASS");

  if (json_mode) {
    json doc;
    doc["checks"] = json::array();
    for (const InvariantCheck& c : suite.checks) {
      json check;
      check["name"] = c.name;
      check["verdict"] = c.pass ? "PASS" : "FAIL";
      check["detail"] = c.detail;
      doc["checks"].push_back(std::move(check));
    }
    json oracle_check;
    oracle_check["name"] = "oracle_rank_agreement";
    oracle_check["verdict"] = oracle_verdict;
    oracle_check["detail"] = oracle.detail;
    doc["checks"].push_back(std::move(oracle_check));
    doc["verdict"] = final_verdict;
    std::cout << detail::dump(doc);
  } else {
    for (const InvariantCheck& c : suite.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                << (c.pass || c.detail.empty() ? "" : ": " + c.detail) << "\n";
    std::cout << oracle_verdict << " oracle_rank_agreement"
              << (oracle.detail.empty() ? "" : ": " + oracle.detail) << "\n";
    std::cout << "VERDICT: " << final_verdict << "\n";
  }
  if (final_verdict == "PASS") return 0;
  return final_verdict == "FAIL" ? 1 : 3;
}

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"K-ring calculator for flag Bott towers"};
  app.require_subcommand(1);
  int result = 0;

  struct {
    std::string file;
    bool json = false;
  } validate_opts;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a tower spec document and report its rank");
  validate->add_option("spec", validate_opts.file, "spec JSON file")
      ->required();
  validate->add_flag("--json", validate_opts.json, "machine-readable output");
  validate->callback([&] {
    result = run_validate(validate_opts.file, validate_opts.json);
  });

  struct {
    std::string file;
    std::string out;
    bool json = false;
  } present_opts;
  CLI::App* present = app.add_subcommand(
      "present", "Emit the generators-and-relations presentation");
  present->add_option("spec", present_opts.file, "spec JSON file")->required();
  present->add_option("-o,--output", present_opts.out, "write to a file");
  present->add_flag("--json", present_opts.json,
                    "machine-readable output (the default for this command)");
  present->callback([&] {
    result = run_present(present_opts.file, present_opts.json,
                         present_opts.out);
  });

  struct {
    std::string file;
    std::string expr;
    bool json = false;
  } reduce_opts;
  CLI::App* reduce = app.add_subcommand(
      "reduce", "Reduce an expression to its normal form on the basis");
  reduce->add_option("spec", reduce_opts.file, "spec JSON file")->required();
  reduce->add_option("--expr", reduce_opts.expr, "expression to reduce")
      ->required();
  reduce->add_flag("--json", reduce_opts.json, "machine-readable output");
  reduce->callback([&] {
    result = run_reduce(reduce_opts.file, reduce_opts.expr, reduce_opts.json);
  });

  struct {
    std::string file;
    bool oracle = false;
    std::uint64_t budget = kDefaultOracleBudget;
    bool json = false;
  } rank_opts;
  CLI::App* rank = app.add_subcommand(
      "rank", "Print the additive rank, optionally cross-checked");
  rank->add_option("spec", rank_opts.file, "spec JSON file")->required();
  rank->add_flag("--oracle", rank_opts.oracle,
                 "cross-check with the polynomial-ideal oracle");
  rank->add_option("--budget", rank_opts.budget,
                   "oracle step budget (default 10^7)");
  rank->add_flag("--json", rank_opts.json, "machine-readable output");
  rank->callback([&] {
    result = run_rank(rank_opts.file, rank_opts.oracle, rank_opts.budget,
                      rank_opts.json);
  });

  struct {
    std::string file;
    std::string generator;
    bool json = false;
  } mult_opts;
  CLI::App* mult = app.add_subcommand(
      "mult-table", "Matrix of multiplication by one generator");
  mult->add_option("spec", mult_opts.file, "spec JSON file")->required();
  mult->add_option("--generator", mult_opts.generator, "generator as 'j,k'")
      ->required();
  mult->add_flag("--json", mult_opts.json, "machine-readable output");
  mult->callback([&] {
    result = run_mult_table(mult_opts.file, mult_opts.generator,
                            mult_opts.json);
  });

  struct {
    std::string cartan;
    std::string word;
    std::string out;
    bool json = false;
  } from_bs_opts;
  CLI::App* from_bs = app.add_subcommand(
      "from-bs", "Derive a tower spec from Cartan data and an index word");
  from_bs->add_option("cartan", from_bs_opts.cartan, "Cartan JSON file")
      ->required();
  from_bs->add_option("word", from_bs_opts.word, "word JSON file")->required();
  from_bs->add_option("-o,--output", from_bs_opts.out, "write to a file");
  from_bs->add_flag("--json", from_bs_opts.json,
                    "machine-readable output (the default for this command)");
  from_bs->callback([&] {
    result = run_from_bs(from_bs_opts.cartan, from_bs_opts.word,
                         from_bs_opts.json, from_bs_opts.out);
  });

  struct {
    std::string cartan;
    std::string word;
    std::string out;
    bool json = false;
  } simplify_opts;
  CLI::App* simplify = app.add_subcommand(
      "bs-simplify",
      "One-relation-per-stage presentation for a singleton word");
  simplify->add_option("cartan", simplify_opts.cartan, "Cartan JSON file")
      ->required();
  simplify->add_option("word", simplify_opts.word, "word JSON file")
      ->required();
  simplify->add_option("-o,--output", simplify_opts.out, "write to a file");
  simplify->add_flag("--json", simplify_opts.json,
                     "machine-readable output (the default for this command)");
  simplify->callback([&] {
    result = run_bs_simplify(simplify_opts.cartan, simplify_opts.word,
                             simplify_opts.json, simplify_opts.out);
  });

  struct {
    std::string file;
    std::uint64_t budget = kDefaultOracleBudget;
    int pairs = 100;
    std::uint64_t seed = 20260814;
    bool json = false;
  } verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the soundness battery and the oracle cross-check");
  verify->add_option("spec", verify_opts.file, "spec JSON file")->required();
  verify->add_option("--budget", verify_opts.budget,
                     "oracle step budget (default 10^7)");
  verify->add_option("--pairs", verify_opts.pairs,
                     "random samples per property check");
  verify->add_option("--seed", verify_opts.seed, "random seed");
  verify->add_flag("--json", verify_opts.json, "machine-readable output");
  verify->callback([&] {
    result = run_verify(verify_opts.file, verify_opts.budget,
                        verify_opts.pairs, verify_opts.seed, verify_opts.json);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    detail::print_error(e.what());
    return detail::exit_code_for(e);
  } catch (const std::exception& e) {
    detail::print_error(std::string("unexpected failure: ") + e.what());
    return 1;
  }
  return result;
}

}  // namespace kbott
