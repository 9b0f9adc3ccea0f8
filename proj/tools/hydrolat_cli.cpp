// Experiment runner for the lattice hydrodynamic-scaling suite.
//
//   hydrolat-cli run <config> [--seed S] [--jobs J] [--out DIR]
//   hydrolat-cli table <results.csv>
//   hydrolat-cli plot <results.csv> [--out DIR]
//   hydrolat-cli check <config>
//
// exit codes: 0 ok, 2 validation error, 3 numeric failure

#include <filesystem>
#include <fstream>
#include <iostream>

#include "hydrolat/experiment.hpp"

using namespace hydrolat;

namespace {

struct Args {
  std::string command;
  std::string target;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  std::string out;
};

Args parse_args(int argc, char** argv) {
  Args a;
  if (argc < 3) throw ValidationError("usage: hydrolat-cli <run|table|plot|check> <file> [flags]");
  a.command = argv[1];
  a.target = argv[2];
  for (int i = 3; i < argc; ++i) {
    std::string flag = argv[i];
    auto need_value = [&]() -> std::string {
      if (i + 1 >= argc) throw ValidationError("flag " + flag + " needs a value");
      return argv[++i];
    };
    if (flag == "--seed") {
      a.seed = std::stoull(need_value());
      a.seed_set = true;
    } else if (flag == "--jobs") {
      a.jobs = std::stoi(need_value());
    } else if (flag == "--out") {
      a.out = need_value();
    } else {
      throw ValidationError("unknown flag " + flag);
    }
  }
  return a;
}

int run_main(const Args& args) {
  ExperimentConfig cfg = load_config(args.target);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (!args.out.empty()) cfg.out_dir = args.out;

  ResultTable table = run_experiment(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.want_csv) {
    std::string path = cfg.out_dir + "/results.csv";
    std::ofstream os(path, std::ios::binary);
    table.write_csv(os);
    std::cout << "wrote " << path << " (" << table.rows.size() << " rows)\n";
  }
  if (cfg.want_svg) {
    for (const std::string& f : render_plots(table, cfg.out_dir))
      std::cout << "wrote " << f << "\n";
  }
  return 0;
}

int table_main(const Args& args) {
  std::ifstream is(args.target);
  if (!is) throw ValidationError("cannot open " + args.target);
  ResultTable t = ResultTable::read_csv(is);
  std::cout << convergence_table(t);
  return 0;
}

int plot_main(const Args& args) {
  std::ifstream is(args.target);
  if (!is) throw ValidationError("cannot open " + args.target);
  ResultTable t = ResultTable::read_csv(is);
  std::string dir = args.out.empty() ? "." : args.out;
  std::filesystem::create_directories(dir);
  for (const std::string& f : render_plots(t, dir)) std::cout << "wrote " << f << "\n";
  return 0;
}

int check_main(const Args& args) {
  ExperimentConfig cfg = load_config(args.target);
  bool ok = run_checks(cfg, std::cout);
  if (!ok) {
    std::cout << "check: FAILED\n";
    return 3;
  }
  std::cout << "check: ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Args args = parse_args(argc, argv);
    if (args.command == "run") return run_main(args);
    if (args.command == "table") return table_main(args);
    if (args.command == "plot") return plot_main(args);
    if (args.command == "check") return check_main(args);
    throw ValidationError("unknown command " + args.command);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
