#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdetect {

/// Command-line entry point, callable from tests.
///
/// Exit codes: 0 every queried property holds, 1 some queried property fails
/// (or the two consistency routes disagree), 2 precondition violation
/// (parse error, cyclic unobservable subnet, unbounded net, deadlock),
/// 3 internal budget exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdetect
