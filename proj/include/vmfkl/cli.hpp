#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vmfkl/vmf.hpp"

namespace vmfkl::cli {

enum class Subcommand { special, kl, bound, sample, figure, audit };
enum class OutputFormat { csv, json, pretty };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct CliConfig {
    Subcommand subcommand = Subcommand::special;
    OutputFormat output_format = OutputFormat::pretty;
    std::optional<std::string> output_path;
    std::uint64_t seed = 0;

    // special
    std::string fn = "log_bessel_i";
    double x = 1.0;
    int s = 1;
    double alpha = 0.0;
    double z = 1.0;
    double d_real = 1.0;
    double kappa_real = 1.0;

    // kl / bound / sample
    int d = 3;
    double kappa_q = 1.0;
    double kappa_p = 1.0;
    double cos_theta = 1.0;
    std::size_t n_mc = 0;
    double kappa = 1.0;
    std::size_t n = 1000;
    std::vector<double> mu;

    // audit
    std::string grid_spec;
    bool certify = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

// figure: three d = 3 clouds of 1000 points. Mean directions
// sit 60 degrees from e_3 at azimuths 0, 120 and 240 degrees.
inline constexpr std::array<double, 3> kFigureKappas = {1.0, 10.0, 100.0};
inline constexpr std::size_t kFigurePoints = 1000;
std::array<UnitVector, 3> figure_directions();

/// Runs the command line `argv` (argv[0] is the program name). Artifacts go
/// to --out or `out`; diagnostics go to `err`. Returns 0 on success, 2 on
/// argument errors and 3 on numerical-domain errors.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace vmfkl::cli
