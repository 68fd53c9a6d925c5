#pragma once
#include <string>
#include <vector>

namespace synseg {

// Runs one subcommand. Returns 0 on success, 1 on numeric failure, 2 on usage errors.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace synseg
