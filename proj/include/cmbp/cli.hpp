#pragma once

/// Command-line front end: plan, verify, oracle and bench subcommands with
/// text and JSON reports.
///
/// Exit codes: 0 plan found / check passed, 1 no solution / check failed,
/// 2 inconclusive (depth or bound hit), 3 usage, syntax or validation error,
/// 4 resource limit, 5 internal error.
namespace cmbp::cli {

int run(int argc, char** argv);

} // namespace cmbp::cli
