#include "dritz/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  os << text;
}

std::vector<double> parse_gamma_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::runtime_error("empty gamma list");
  return out;
}

std::vector<int> parse_level_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::runtime_error("empty level list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete energy minimization over discontinuous spaces"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  auto* study = app.add_subcommand("study", "Run a convergence study");
  study->add_option("--config", config_path, "Study config file")->required();
  study->add_option("--out", out_path, "Output CSV path (default: stdout)");

  std::string gamma_list = "10,100";
  std::string level_list = "4,8,16,32,64";
  int degree = 2;
  std::string t1_out;
  auto* table1 = app.add_subcommand(
      "table1", "Piecewise-gradient scheme error columns per penalty value");
  table1->add_option("--gamma", gamma_list, "Comma-separated penalty values");
  table1->add_option("--levels", level_list, "Comma-separated mesh levels");
  table1->add_option("--degree", degree, "Polynomial degree");
  table1->add_option("--out", t1_out, "Output CSV path (default: stdout)");

  std::string plot_config, plot_out;
  auto* plot = app.add_subcommand(
      "plot-data", "Sample the finest-level solution against the exact one");
  plot->add_option("--config", plot_config, "Study config file")->required();
  plot->add_option("--out", plot_out, "Output CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed()) {
      const dritz::StudyConfig cfg = dritz::parse_config_file(config_path);
      const dritz::ConvergenceTable table = dritz::run_study(cfg);
      const std::string text = dritz::emit_table(table, dritz::TableFormat::Csv);
      write_out(text, out_path.empty() ? cfg.out : out_path);
    } else if (table1->parsed()) {
      const std::string text = dritz::run_table1(parse_gamma_list(gamma_list),
                                                 parse_level_list(level_list),
                                                 degree);
      write_out(text, t1_out);
    } else if (plot->parsed()) {
      const dritz::StudyConfig cfg = dritz::parse_config_file(plot_config);
      write_out(dritz::plot_data(cfg), plot_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
