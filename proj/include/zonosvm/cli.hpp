#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"
#include "zonosvm/io.hpp"
#include "zonosvm/trainer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace zonosvm {

// One CLI invocation. mu is only meaningful for train/sweep, degree only for
// lift; parse_args enforces that.
struct RunConfig {
    std::string command;  // train | separability | lift | check | sweep
    std::string input_path;
    DatasetFormat format = DatasetFormat::csv;
    double mu = 0.0;
    BiasStrategy bias = BiasStrategy::halfway;
    double eps = 1e-7;
    SolverKind solver = SolverKind::automatic;
    std::string output_path;  // empty -> stdout
    std::string plot_path;    // train only; empty -> no plot
    int degree = 0;           // lift only
    int sweep_points = 10;    // sweep only
    std::uint64_t seed = 0x5eedf00dULL;  // check; overridden by ZONOSVM_SEED
};

// Exit codes: 0 success, 1 parse/validation failure, 2 solver
// nonconvergence, 3 internal error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNonconvergence = 2;
inline constexpr int kExitInternal = 3;

// Parses argv into a RunConfig. Throws CLI::ParseError-derived exceptions
// out of CLI11; main translates those (help -> 0, errors -> 1).
RunConfig parse_args(int argc, const char* const* argv);

// Executes the command and writes a JSON report to config.output_path (or
// `fallback_out` when the path is empty); `lift` writes the lifted dataset in
// the input format instead. Returns an exit code; never throws.
int run(const RunConfig& config, std::ostream& fallback_out, std::ostream& err);

// 2-D scatter plot with decision line, both slab lines and (for mu < 1) the
// polygonal outlines of both reduced hulls, written as an SVG file. Refuses
// (ValidationError) datasets with d != 2 or a degenerate classifier.
void emit_plot_data(const TrainedClassifier& c, const LabeledDataset& ds,
                    const std::string& path);

}  // namespace zonosvm
