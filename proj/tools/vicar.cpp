#include <chrono>
#include <iostream>

#include <fmt/core.h>

#include "vicar/config.hpp"
#include "vicar/output.hpp"

using namespace vicar;

int main(int argc, char** argv) {
  std::optional<CliOptions> options;
  try {
    options = parse_args(argc, argv, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "vicar: error: " << e.what() << '\n';
    return e.code();
  }
  if (!options) return kExitOk;

  const ExperimentSpec& spec = options->spec;
  try {
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "vicar: error: invalid experiment: " << e.what() << '\n';
    return kExitBadConfig;
  }

  std::cerr << fmt::format("vicar: {} cells x {} runs, seed {}, {} worker(s)\n",
                           spec.cells.size(), spec.n_runs, spec.master_seed,
                           options->workers);
  const auto start = std::chrono::steady_clock::now();
  auto last = start;
  auto log_cell = [&](std::size_t index, const CellResult& r) {
    const auto now = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(now - last).count();
    last = now;
    std::cerr << fmt::format("[{}/{}] {} {} {} ({:.1f}s){}\n", index + 1,
                             spec.cells.size(), preset_label(r.cell),
                             to_string(r.cell.mode), r.cell.topology.to_string(),
                             secs, r.ok() ? "" : " FAILED: " + r.error);
  };

  const auto results = execute(spec, options->workers, log_cell);
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();

  try {
    write_outputs(options->out_dir, results, spec, options->json,
                  options->workers, wall);
  } catch (const IoError& e) {
    std::cerr << "vicar: error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "vicar: error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  std::size_t failed = 0;
  for (const auto& r : results) failed += r.ok() ? 0 : 1;
  if (failed) {
    std::cerr << fmt::format("vicar: {} of {} cells failed\n", failed, results.size());
    return kExitCellFailed;
  }
  std::cerr << fmt::format("vicar: wrote {} in {:.1f}s\n",
                           options->out_dir.string(), wall);
  return kExitOk;
}
