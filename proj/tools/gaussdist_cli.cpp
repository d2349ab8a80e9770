// Command-line driver for the average subsystem distance experiments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaussdist/diagnostics.hpp"
#include "gaussdist/errors.hpp"
#include "gaussdist/experiments.hpp"
#include "gaussdist/ising.hpp"
#include "gaussdist/random_ensemble.hpp"
#include "gaussdist/sweep.hpp"

namespace {

using namespace gaussdist;
using nlohmann::ordered_json;

constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;

std::vector<int> parse_int_list(const std::string& text, std::string_view what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError(fmt::format("invalid {} '{}'", what, text));
    }
  }
  return out;
}

std::optional<ising::SectorFilter> parse_sector(const std::string& text) {
  if (text.empty() || text == "full") return std::nullopt;
  const std::vector<int> v = parse_int_list(text, "sector");
  if (v.size() != 2) throw ValidationError(fmt::format("sector must be 'P,K', got '{}'", text));
  return ising::SectorFilter{v[0], v[1]};
}

// Writes to the file if a path is given, otherwise to stdout.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(fmt::format("cannot open '{}' for writing", path));
  write(out);
}

ordered_json to_json(const SweepResult& r) {
  ordered_json j;
  j["model"] = r.model;
  j["L"] = r.L;
  j["param"] = r.param;
  j["sector"] = r.sector;
  j["ordering"] = r.ordering;
  j["metric"] = std::string(to_string(r.metric));
  if (r.seed) j["seed"] = *r.seed;
  if (r.fit) {
    j["fit"] = {{"slope", r.fit->slope},
                {"intercept", r.fit->intercept},
                {"ell_min", r.fit->ell_min},
                {"ell_max", r.fit->ell_max},
                {"points", r.fit->points},
                {"scaled_by_inverse_sqrt2", r.metric == Metric::Bures}};
  } else {
    j["fit"] = nullptr;
  }
  j["notes"] = r.notes;
  return j;
}

void emit_sweep(const SweepResult& result, const std::string& out, bool fit) {
  emit(out, [&](std::ostream& os) { write_sweep_csv(result, os); });
  if (!out.empty() && out != "-") {
    emit(out + ".json", [&](std::ostream& os) { os << to_json(result).dump(2) << '\n'; });
  }
  if (fit) {
    if (result.fit) {
      fmt::print(std::cerr, "fit: slope={:.6f} intercept={:.6f} over ell {}..{}\n", result.fit->slope,
                 result.fit->intercept, result.fit->ell_min, result.fit->ell_max);
    } else {
      fmt::print(std::cerr, "fit: window not covered by the requested ell range\n");
    }
  }
}

struct ChainOptions {
  int L = 8;
  double h = 1.0;
  std::string sector = "full";
  std::string ordering = "charges:0";

  void attach(CLI::App* app) {
    app->add_option("--L", L, "Chain length")->required();
    app->add_option("--h", h, "Transverse field")->capture_default_str();
    app->add_option("--sector", sector, "Sector filter 'P,K' or 'full'")->capture_default_str();
    app->add_option("--ordering", ordering, "charges:I,J,... or random:SEED")->capture_default_str();
  }

  ising::SpectrumTable table(const ising::IsingChain& chain) const {
    return apply_ordering(chain.enumerate(parse_sector(sector)), parse_ordering(ordering));
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Average subsystem distances between eigenstates of spin chains"};
  app.require_subcommand(1);
  // "--h" is the transverse field, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  // spectrum
  ChainOptions spec_opts;
  int spec_charges = -1;
  std::string spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "Export the labelled Ising spectrum");
  spec_opts.attach(spectrum);
  spectrum->add_option("--charges", spec_charges, "Number of charges to export (default: L)");
  spectrum->add_option("--out", spec_out, "Output CSV (default: stdout)");

  // sweep
  std::string model = "ising";
  ChainOptions sweep_opts;
  double delta = std::sqrt(2.0);
  double h_z = 0.0;
  std::string metric_text = "bures";
  int ell_min = 0;
  int ell_max = 0;
  bool fit = false;
  std::uint64_t seed = 1;
  int count = 32;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Average subsystem distance versus ell");
  sweep->add_option("--model", model, "ising | xxz | random")
      ->check(CLI::IsMember({"ising", "xxz", "random"}))
      ->capture_default_str();
  sweep_opts.attach(sweep);
  sweep->add_option("--delta", delta, "XXZ anisotropy")->capture_default_str();
  sweep->add_option("--hz", h_z, "XXZ longitudinal field")->capture_default_str();
  sweep->add_option("--metric", metric_text, "bures | trace")->capture_default_str();
  sweep->add_option("--ell-min", ell_min, "Smallest subsystem (default 1)");
  sweep->add_option("--ell-max", ell_max, "Largest subsystem (default L-1)");
  sweep->add_flag("--fit", fit, "Report the linear fit on stderr");
  sweep->add_option("--seed", seed, "Random ensemble seed")->capture_default_str();
  sweep->add_option("--count", count, "Random ensemble size")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV; a .json sidecar is written next to it");

  // degeneracy
  ChainOptions deg_opts;
  std::string deg_out;
  auto* degeneracy = app.add_subcommand("degeneracy", "Degeneracy ratio r(m) after hierarchical sorting");
  deg_opts.attach(degeneracy);
  degeneracy->add_option("--out", deg_out, "Output CSV (default: stdout)");

  // charges
  ChainOptions charge_opts;
  std::string charge_list = "0,1,2";
  std::string charge_out;
  auto* charges = app.add_subcommand("charges", "Charge profiles across the ordered spectrum");
  charge_opts.attach(charges);
  charges->add_option("--indices", charge_list, "Comma-separated charge indices")->capture_default_str();
  charges->add_option("--out", charge_out, "Output CSV (default: stdout)");

  // random-sweep
  RandomEnsembleSpec rspec;
  rspec.seed = 1;
  std::string r_metric = "bures";
  int r_min = 0;
  int r_max = 0;
  bool r_fit = false;
  std::string r_out;
  auto* random_sweep = app.add_subcommand("random-sweep", "All-pairs averages over random pure Gaussian states");
  random_sweep->add_option("--L", rspec.L, "Number of sites")->required();
  random_sweep->add_option("--count", rspec.count, "Number of states")->capture_default_str();
  random_sweep->add_option("--seed", rspec.seed, "Seed")->capture_default_str();
  random_sweep->add_option("--metric", r_metric, "bures | trace")->capture_default_str();
  random_sweep->add_option("--ell-min", r_min, "Smallest subsystem (default 1)");
  random_sweep->add_option("--ell-max", r_max, "Largest subsystem (default L-1)");
  random_sweep->add_flag("--fit", r_fit, "Report the linear fit on stderr");
  random_sweep->add_option("--out", r_out, "Output CSV; a .json sidecar is written next to it");

  // xxz-sweep
  int x_L = 12;
  int x_K = 1;
  int x_down = 2;
  double x_delta = std::sqrt(2.0);
  double x_hz = 0.0;
  std::string x_metric = "trace";
  int x_min = 0;
  int x_max = 0;
  bool x_fit = false;
  std::string x_out;
  auto* xxz_sweep_cmd = app.add_subcommand("xxz-sweep", "All-pairs averages inside one XXZ sector");
  xxz_sweep_cmd->add_option("--L", x_L, "Chain length")->capture_default_str();
  xxz_sweep_cmd->add_option("--K", x_K, "Momentum integer")->capture_default_str();
  xxz_sweep_cmd->add_option("--n-down", x_down, "Number of down spins")->capture_default_str();
  xxz_sweep_cmd->add_option("--delta", x_delta, "Anisotropy")->capture_default_str();
  xxz_sweep_cmd->add_option("--hz", x_hz, "Longitudinal field")->capture_default_str();
  xxz_sweep_cmd->add_option("--metric", x_metric, "bures | trace")->capture_default_str();
  xxz_sweep_cmd->add_option("--ell-min", x_min, "Smallest subsystem (default 1)");
  xxz_sweep_cmd->add_option("--ell-max", x_max, "Largest subsystem (default L-1)");
  xxz_sweep_cmd->add_flag("--fit", x_fit, "Report the linear fit on stderr");
  xxz_sweep_cmd->add_option("--out", x_out, "Output CSV; a .json sidecar is written next to it");

  // mode-diff
  ChainOptions mode_opts;
  auto* mode_diff = app.add_subcommand("mode-diff", "Mean change in excited-mode number between neighbours");
  mode_opts.attach(mode_diff);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (spectrum->parsed()) {
    const ising::IsingChain chain(spec_opts.L, spec_opts.h);
    const auto table = spec_opts.table(chain);
    emit(spec_out, [&](std::ostream& os) {
      write_spectrum_csv(table, os, spec_charges < 0 ? spec_opts.L : spec_charges);
    });
  } else if (sweep->parsed()) {
    const Metric metric = parse_metric(metric_text);
    SweepResult result;
    if (model == "ising") {
      const ising::IsingChain chain(sweep_opts.L, sweep_opts.h);
      result = ising_sweep(chain, sweep_opts.table(chain), metric, ell_min, ell_max);
    } else if (model == "xxz") {
      // Sector for XXZ is 'K,n_down'.
      const std::vector<int> v = sweep_opts.sector == "full" ? std::vector<int>{1, 2}
                                                             : parse_int_list(sweep_opts.sector, "sector");
      if (v.size() != 2) throw ValidationError("XXZ sector must be 'K,n_down'");
      result = xxz_sweep(sweep_opts.L, v[0], v[1], delta, h_z, metric, ell_min, ell_max);
    } else {
      result = random_average_sweep({sweep_opts.L, count, seed}, metric, ell_min, ell_max);
    }
    emit_sweep(result, sweep_out, fit);
  } else if (degeneracy->parsed()) {
    const ising::IsingChain chain(deg_opts.L, deg_opts.h);
    const auto table = deg_opts.table(chain);
    emit(deg_out, [&](std::ostream& os) {
      os << "m,r,pairs,states\n";
      for (int m = 0; m < deg_opts.L; ++m) {
        fmt::print(os, "{},{:.17g},{},{}\n", m, ising::degeneracy_ratio(table, m),
                   ising::degenerate_pairs(table, m), table.states.size());
      }
    });
  } else if (charges->parsed()) {
    const ising::IsingChain chain(charge_opts.L, charge_opts.h);
    const auto table = charge_opts.table(chain);
    const std::vector<int> indices = parse_int_list(charge_list, "charge list");
    emit(charge_out, [&](std::ostream& os) { export_charge_profiles(table, indices, os); });
  } else if (random_sweep->parsed()) {
    const SweepResult result = random_average_sweep(rspec, parse_metric(r_metric), r_min, r_max);
    emit_sweep(result, r_out, r_fit);
  } else if (xxz_sweep_cmd->parsed()) {
    const SweepResult result = xxz_sweep(x_L, x_K, x_down, x_delta, x_hz, parse_metric(x_metric), x_min, x_max);
    emit_sweep(result, x_out, x_fit);
  } else if (mode_diff->parsed()) {
    const ising::IsingChain chain(mode_opts.L, mode_opts.h);
    const auto table = mode_opts.table(chain);
    fmt::print("{:.17g}\n", ising::mode_number_difference(table));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gaussdist::GuardError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitGuard;
  } catch (const gaussdist::ValidationError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return 1;
  }
}
