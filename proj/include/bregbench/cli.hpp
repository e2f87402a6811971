#ifndef BREGBENCH_CLI_HPP
#define BREGBENCH_CLI_HPP

namespace bregbench {

/// The `bench` entry point, separated from main() for testing.
/// Exit codes: 0 success, 1 config/usage error, 2 partial sweep failure,
/// 3 total failure.
int bench_main(int argc, const char* const* argv);

} // namespace bregbench

#endif // BREGBENCH_CLI_HPP
