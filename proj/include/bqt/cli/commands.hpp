#pragma once

#include <string>
#include <vector>

#include "bqt/cli/run_config.hpp"

namespace bqt::cli {

struct CommandOutput {
  std::string body;   // the dataset or report
  std::string notes;  // human-oriented extras, written to stderr
};

// Fixed CSV headers.
const std::vector<std::string>& fig1_header();
const std::vector<std::string>& fig4_header();
const std::vector<std::string>& fig5_header();
const std::vector<std::string>& validate_header();

CommandOutput cmd_fig1(const RunConfig& config);
CommandOutput cmd_fig4(const RunConfig& config);
CommandOutput cmd_fig5(const RunConfig& config);
CommandOutput cmd_circuit(const RunConfig& config);
CommandOutput cmd_compare(const RunConfig& config);
CommandOutput cmd_validate(const RunConfig& config);

// Dispatches on config.subcommand.
CommandOutput run(const RunConfig& config);

// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace bqt::cli
