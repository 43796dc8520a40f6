#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stab {

// Command-line front end. Commands: check, decompose, witness, oracle.
// Exit codes: 0 stable, 10 unstable, 1 input error, 2 resource limit,
// 3 failed cross-check under --verify.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace stab
