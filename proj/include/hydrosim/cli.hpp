#ifndef HYDROSIM_CLI_HPP
#define HYDROSIM_CLI_HPP

namespace hydrosim {

/// Entry point behind the hydrosim binary. Exit codes: 0 success,
/// 1 infeasible/violations found, 2 input error.
int run_cli(int argc, const char* const* argv);

} // namespace hydrosim

#endif
