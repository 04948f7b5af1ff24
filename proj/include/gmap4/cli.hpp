/**
 * @file cli.hpp
 * @brief Command-line front end.
 *
 *   gmap4 analyze     --surface FILE [--grid NX,NY] [--out FILE] [--format json|csv]
 *   gmap4 gaussmap    --surface FILE [--grid NX,NY] --out FILE
 *   gmap4 congruence  --surface FILE [--grid NX,NY] [--tol-circle T] [--tol-symp T]
 *   gmap4 reconstruct --c VALUE [--out FILE]
 *   gmap4 verify      --suite plucker|blaschke|wong|lagrangean|lift|all
 *
 * Exit codes: 0 success, 1 property or verification failure, 2 input error.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmap4::cli {

enum ExitCode : int { ok = 0, propertyFailure = 1, inputError = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// JSON with every floating-point number printed to 17 significant digits;
/// non-finite values become null.
std::string format_number(double v);

}  // namespace gmap4::cli
