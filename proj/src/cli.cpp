#include "iclab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "iclab/config.hpp"
#include "iclab/serialize.hpp"

namespace iclab::cli {

namespace {

void print_eps_table(const std::vector<EpsEvidence>& table) {
  for (const auto& ev : table) {
    std::cout << "  eps=" << ev.eps << "  exceptional-set=" << to_string(ev.tag)
              << "  window-density=[" << ev.min_ratio << ", " << ev.max_ratio << "]\n";
  }
}

std::string limit_string(const std::vector<double>& limit) {
  std::string s = "(";
  for (std::size_t i = 0; i < limit.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(limit[i]);
  }
  return s + ")";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path.string());
  out << text;
}

nlohmann::ordered_json manifest_json(const std::string& command, const ExperimentConfig& cfg,
                                     const std::vector<std::string>& outputs, double seconds) {
  nlohmann::ordered_json m{{"artifact", "iclab"},
                           {"version", kVersion},
                           {"command", command},
                           {"config",
                            {{"kind", cfg.kind},
                             {"subject", cfg.subject},
                             {"ideal", cfg.ideal},
                             {"horizon", cfg.horizon},
                             {"trials", cfg.trials},
                             {"points", cfg.points},
                             {"seed", cfg.seed},
                             {"eps_min", cfg.eps_min},
                             {"sampler", cfg.sampler},
                             {"construct_target", cfg.construct_target}}},
                           {"workers", cfg.workers},
                           {"out_dir", cfg.out_dir},
                           {"outputs", outputs},
                           {"elapsed_seconds", seconds}};
  return m;
}

}  // namespace

int run_analyze(const AnalyzeArgs& args) {
  try {
    auto ideal = ideal_by_name(args.ideal);
    auto x = sequence_by_name(args.sequence, Horizon(args.horizon));
    auto grid = eps_grid_down_to(args.eps_min);
    auto conv = i_converges(x, ideal, grid);
    auto cauchy = i_cauchy(x, ideal, grid);

    std::cout << "sequence: " << args.sequence << "  ideal: " << args.ideal
              << "  horizon: " << args.horizon << "\n";
    std::cout << "i-convergence: " << to_string(conv.tag);
    if (conv.tag == ConvergenceTag::convergent)
      std::cout << "  limit=" << limit_string(conv.limit);
    std::cout << "\n";
    if (!conv.eps_table.empty()) print_eps_table(conv.eps_table);
    if (conv.tag == ConvergenceTag::divergent) {
      std::cout << "  rejected candidates:\n";
      for (const auto& rej : conv.rejects)
        std::cout << "    z=" << limit_string(rej.point) << "  eps=" << rej.eps.eps
                  << "  exceptional-set=" << to_string(rej.eps.tag) << "\n";
    }
    std::cout << "i-cauchy: " << to_string(cauchy.tag);
    if (cauchy.tag == CauchyTag::cauchy) std::cout << "  anchor=" << cauchy.anchor;
    std::cout << "\n";
    if (!cauchy.eps_table.empty()) print_eps_table(cauchy.eps_table);

    return conv.tag == ConvergenceTag::undecided ? kExitUndecided : kExitOk;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_construct(const ConstructArgs& args) {
  try {
    auto ideal = ideal_by_name(args.ideal);
    auto x = sequence_by_name(args.sequence, Horizon(args.horizon));
    auto grid = default_eps_grid();
    BuildOptions opts;
    opts.target_len = args.target;
    opts.seed = args.seed;
    opts.min_rounds = args.min_rounds;

    std::filesystem::create_directories(args.out_dir);
    std::filesystem::path dir(args.out_dir);

    std::vector<BuildStep> steps;
    ConvergenceTag replay;
    std::filesystem::path selection_path;
    if (args.perm) {
      auto build = build_divergent_perm(x, ideal, opts);
      steps = build.steps;
      selection_path = dir / "selection_perm.txt";
      std::ofstream out(selection_path);
      write_perm(out, build.selection);
      replay = i_converges(apply_selection(x, build.selection), ideal, grid).tag;
    } else {
      auto build = build_divergent_subseq(x, ideal, opts);
      steps = build.steps;
      selection_path = dir / "selection_subseq.txt";
      std::ofstream out(selection_path);
      write_subseq(out, build.selection);
      replay = i_converges(apply_selection(x, build.selection), ideal, grid).tag;
    }
    write_text(dir / "trace.txt", format_trace(steps));

    std::cout << "selection: " << selection_path.string() << "\n";
    std::cout << "trace: " << (dir / "trace.txt").string() << "\n";
    std::cout << "rounds: " << steps.size() << "\n";
    std::cout << "replay verdict: " << to_string(replay) << "\n";
    return kExitOk;
  } catch (const not_constructible_error& e) {
    std::cerr << "not constructible: " << e.what() << "\n";
    return kExitNotConstructible;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_experiment(ExperimentArgs args) {
  try {
    if (!args.manifest_path.empty()) args.config = config_from_manifest(args.manifest_path);
    args.config.validate();

    auto t0 = std::chrono::steady_clock::now();
    auto report = experiment_report(args.config);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::filesystem::create_directories(args.config.out_dir);
    std::filesystem::path dir(args.config.out_dir);
    write_text(dir / "report.json", report.dump(2) + "\n");
    write_text(dir / "tallies.csv", report_csv(report));
    auto manifest = manifest_json("experiment", args.config,
                                  {(dir / "report.json").string(), (dir / "tallies.csv").string()},
                                  seconds);
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    std::cout << report.dump(2) << "\n";
    std::cout << "outputs in " << dir.string() << " (report.json, tallies.csv, manifest.json)\n";
    return kExitOk;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"finite-truncation toolkit for ideal convergence of sequences and selections"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "run both convergence detectors on a sequence");
  cmd_analyze->add_option("--seq", analyze.sequence, "sequence name or csv:<path>")->required();
  cmd_analyze->add_option("--ideal", analyze.ideal, "fin | density");
  cmd_analyze->add_option("--horizon", analyze.horizon, "truncation bound");
  cmd_analyze->add_option("--eps-min", analyze.eps_min, "finest grid epsilon");

  ConstructArgs construct;
  auto* cmd_construct =
      app.add_subcommand("construct", "build a divergent subsequence or rearrangement");
  cmd_construct->add_option("--seq", construct.sequence, "sequence name or csv:<path>")->required();
  cmd_construct->add_option("--ideal", construct.ideal, "fin | density");
  cmd_construct->add_option("--horizon", construct.horizon, "truncation bound");
  cmd_construct->add_option("--target", construct.target, "minimum selection length");
  cmd_construct->add_option("--seed", construct.seed, "prefix seed");
  cmd_construct->add_option("--min-rounds", construct.min_rounds, "minimum extension rounds");
  cmd_construct->add_flag("--perm", construct.perm, "build a rearrangement instead");
  cmd_construct->add_option("--out-dir", construct.out_dir, "output directory");

  ExperimentArgs exp;
  std::string config_path;
  auto* cmd_experiment = app.add_subcommand("experiment", "run a seeded Monte Carlo experiment");
  cmd_experiment->add_option("kind", exp.config.kind, "lk3 | tw3 | cc1 | propg | emeasure");
  cmd_experiment->add_option("-c,--config", config_path, "JSON or TOML config file");
  cmd_experiment->add_option("--from-manifest", exp.manifest_path, "reproduce a recorded run");
  cmd_experiment->add_option("--subject", exp.config.subject, "sequence or family name");
  cmd_experiment->add_option("--ideal", exp.config.ideal, "fin | density");
  cmd_experiment->add_option("--horizon", exp.config.horizon, "truncation bound");
  cmd_experiment->add_option("--trials", exp.config.trials, "selections per series");
  cmd_experiment->add_option("--points", exp.config.points, "domain points");
  cmd_experiment->add_option("--seed", exp.config.seed, "master seed");
  cmd_experiment->add_option("--eps-min", exp.config.eps_min, "finest grid epsilon");
  cmd_experiment->add_option("--workers", exp.config.workers, "worker threads (0 = hardware)");
  cmd_experiment->add_option("--out-dir", exp.config.out_dir, "output directory");
  cmd_experiment->add_option("--sampler", exp.config.sampler, "grid | uniform");
  cmd_experiment->add_option("--construct-target", exp.config.construct_target,
                             "constructed selection length for cc1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (cmd_analyze->parsed()) return run_analyze(analyze);
  if (cmd_construct->parsed()) return run_construct(construct);
  if (cmd_experiment->parsed()) {
    if (!config_path.empty()) {
      try {
        ExperimentConfig from_cli = exp.config;
        exp.config = load_config(config_path);
        // explicit flags override the file
        if (!from_cli.kind.empty()) exp.config.kind = from_cli.kind;
        if (cmd_experiment->count("--subject")) exp.config.subject = from_cli.subject;
        if (cmd_experiment->count("--ideal")) exp.config.ideal = from_cli.ideal;
        if (cmd_experiment->count("--horizon")) exp.config.horizon = from_cli.horizon;
        if (cmd_experiment->count("--trials")) exp.config.trials = from_cli.trials;
        if (cmd_experiment->count("--points")) exp.config.points = from_cli.points;
        if (cmd_experiment->count("--seed")) exp.config.seed = from_cli.seed;
        if (cmd_experiment->count("--eps-min")) exp.config.eps_min = from_cli.eps_min;
        if (cmd_experiment->count("--workers")) exp.config.workers = from_cli.workers;
        if (cmd_experiment->count("--out-dir")) exp.config.out_dir = from_cli.out_dir;
        if (cmd_experiment->count("--sampler")) exp.config.sampler = from_cli.sampler;
        if (cmd_experiment->count("--construct-target"))
          exp.config.construct_target = from_cli.construct_target;
      } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
      }
    }
    return run_experiment(std::move(exp));
  }
  return kExitUsage;
}

}  // namespace iclab::cli
