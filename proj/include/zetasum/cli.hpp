#pragma once

#include "zetasum/zeros.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

/// Command-line front end. The commands are library functions so tests can
/// run them without spawning processes.
namespace zetasum::cli {

struct RunConfig {
    long precision_bits = 128;
    zeros::Mode mode = zeros::Mode::certified;
    double refine_tol = 1e-9;
    double quad_tol_factor = 1e-3;
    std::string zero_source = "compute";  // or a table file
    std::optional<double> t_max;
    std::optional<std::size_t> n_zeros;
};

/// Precision from ZETASUM_PRECISION_BITS, or 128.
long default_precision();

/// Zero table for a run: the file named by zero_source, or computed through
/// zero n_zeros + 1 (so the midpoint after zero n_zeros exists) or to t_max.
zeros::ZeroTable load_or_compute(const RunConfig& config);

/// Runs `zetasum <args...>`; args excludes the program name. Returns the exit
/// code: 0 on success, 1 on a library error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zetasum::cli
