// Command-line front end: encode, eval, sweep and complexity subcommands.
// Every setting can come from a flat key=value file (--config) and/or from
// --key flags; flags win.

#include "ecocecs/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

struct Command {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> values;
};

Command add_command(CLI::App& root, const std::string& name, const std::string& description) {
  Command cmd;
  cmd.app = root.add_subcommand(name, description);
  return cmd;
}

void register_settings(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_file, "Flat key=value settings file")->check(CLI::ExistingFile);
  for (const auto& key : ecocecs::config_keys()) {
    auto* opt = cmd.app->add_option("--" + key, cmd.values[key]);
    if (key == "zscore") {
      opt->expected(0, 1)->default_str("true");
    }
  }
  cmd.app->add_option("--encoder", cmd.values["encoder"], "Alias of --encoders");
}

ecocecs::ExperimentConfig resolve(const Command& cmd) {
  std::map<std::string, std::string> file;
  if (!cmd.config_file.empty()) {
    file = ecocecs::read_config_file(cmd.config_file);
  }
  std::map<std::string, std::string> flags;
  for (const auto& [key, value] : cmd.values) {
    if (cmd.app->count("--" + key) > 0) {
      flags[key] = key == "zscore" && value.empty() ? "true" : value;
    }
  }
  return ecocecs::make_config(file, flags);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ECOC encoding driven by nearest-neighbour data-complexity measures"};
  app.require_subcommand(1);

  Command encode = add_command(app, "encode", "Build coding matrices and write per-node complexity traces");
  Command eval = add_command(app, "eval", "Train, decode and score every configured encoder");
  Command sweep = add_command(app, "sweep", "Evaluate encoders over a list of feature counts");
  Command complexity = add_command(app, "complexity", "Print N2/N3 of a dataset under a bipartition");
  for (Command* cmd : {&encode, &eval, &sweep, &complexity}) {
    register_settings(*cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (encode.app->parsed()) {
      const auto config = resolve(encode);
      const auto out = ecocecs::cmd_encode(config);
      std::cout << "encoder,rows,columns\n";
      for (std::size_t i = 0; i < out.encoders.size(); ++i) {
        std::cout << out.encoders[i] << ',' << out.matrices[i].rows() << ',' << out.matrices[i].cols() << '\n';
      }
    } else if (eval.app->parsed()) {
      const auto config = resolve(eval);
      const auto out = ecocecs::cmd_eval(config);
      std::cout << "encoder,accuracy,precision,recall,fscore\n";
      for (std::size_t i = 0; i < out.table.size(); ++i) {
        const auto& r = out.reports[i];
        std::cout << out.table[i].method << ',' << fmt(r.accuracy) << ',' << fmt(r.precision) << ','
                  << fmt(r.recall) << ',' << fmt(r.fscore) << '\n';
      }
    } else if (sweep.app->parsed()) {
      const auto config = resolve(sweep);
      const auto rows = ecocecs::cmd_sweep(config);
      std::cout << "k,encoder,accuracy,fscore\n";
      for (const auto& r : rows) {
        std::cout << r.k << ',' << r.encoder << ',' << fmt(r.accuracy) << ',' << fmt(r.fscore) << '\n';
      }
    } else if (complexity.app->parsed()) {
      const auto config = resolve(complexity);
      const auto out = ecocecs::cmd_complexity(config);
      std::cout << "measure,value\nN2," << fmt(out.n2) << "\nN3," << fmt(out.n3) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
