// Experiment runner: lacunary <subcommand> [--config PATH] [--cache-dir PATH] [--seed U64] [--samples N]
//                                [--profile literal|relaxed] [--out DIR] [--no-build]
#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

using lacunary::Json;
namespace cli = lacunary::cli;

int main(int argc, char** argv) {
  CLI::App app{"Lacunary Bloch-space experiments"};
  app.require_subcommand(1);

  std::string config_path, cache_dir = ".lacunary-cache", out_dir = "out", profile;
  std::optional<std::uint64_t> seed, samples;
  bool no_build = false;
  const std::map<std::string, std::string> blurbs = {
      {"build-seq", "build and cache an exponent or block table"},
      {"verify-seq", "check a cached table against its conditions"},
      {"sz-test", "distance of a normalized block to the Rayleigh law"},
      {"makarov-test", "exponential integral and growth checks"},
      {"lemma35", "Parseval ratio of a block on its radius"},
      {"estimate-c", "fit the tail constant c_hat"},
      {"separation", "lower bounds for F' - p' on block radii"},
      {"bootstrap", "one induction step on random polynomials"},
      {"report", "collect out/*.json into report.md and report.json"},
  };
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name, blurbs.count(name) ? blurbs.at(name) : "");
    sub->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--cache-dir", cache_dir, "table cache directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--samples", samples, "sample count N");
    sub->add_option("--profile", profile, "constant profile")->check(CLI::IsMember({"literal", "relaxed"}));
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--no-build", no_build, "fail instead of building missing tables");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  cli::RunContext ctx;
  ctx.cache_dir = cache_dir;
  ctx.out_dir = out_dir;
  ctx.no_build = no_build;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        ctx.config = Json::parse(in);
      } catch (const Json::exception& e) {
        throw cli::UsageError("config " + config_path + " is not valid JSON: " + e.what());
      }
      if (!ctx.config.is_object()) throw cli::UsageError("config " + config_path + " must be a JSON object");
    }
    if (seed) ctx.config["seed"] = *seed;
    if (samples) ctx.config[name == "build-seq" || name == "verify-seq" ? "mc_samples" : "samples"] = *samples;
    if (!profile.empty()) ctx.config["profile"] = profile;
    return cli::run_command(name, ctx);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const lacunary::CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
