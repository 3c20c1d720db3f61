// incr: feed words to the incremental interpreter.
//
//   incr --lexicon data/lexicon/demo.lex --world data/worlds/london.world < script
//   incr --lexicon ... --repl

#include <iostream>

#include <CLI11.hpp>

#include "incr/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Word-by-word interpretation of English fragments"};
  incr::CliConfig cfg;
  std::string trace = "min";
  bool repl = false;
  app.add_option("--lexicon", cfg.lexicon_path, "lexicon file")->required()->check(CLI::ExistingFile);
  app.add_option("--world", cfg.world_path, "world model file")->check(CLI::ExistingFile);
  app.add_option("--domain-k", cfg.domain_k, "largest domain size for entailment checks")
      ->check(CLI::Range(1, 6));
  app.add_flag("--s-modifiers", cfg.s_modifiers, "predict VP-modifier slots");
  app.add_option("--trace", trace, "trace verbosity")->check(CLI::IsMember({"min", "full"}));
  app.add_flag("--json", cfg.json, "print the final snapshot as JSON instead of per-word sections");
  app.add_flag("--repl", repl, "interactive mode");
  CLI11_PARSE(app, argc, argv);
  cfg.trace = trace == "full" ? incr::TraceLevel::Full : incr::TraceLevel::Min;

  incr::SessionConfig sc;
  try {
    sc = incr::load_session_config(cfg);
  } catch (const incr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return incr::kExitUsage;
  }
  if (repl) return incr::run_repl(sc, cfg.trace, std::cin, std::cout, std::cerr);
  return incr::run_batch(sc, incr::split_words(std::cin), cfg.trace, cfg.json, std::cout, std::cerr);
}
