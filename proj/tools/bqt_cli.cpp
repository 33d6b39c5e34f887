#include "bqt/cli/commands.hpp"

int main(int argc, char** argv) { return bqt::cli::main_entry(argc, argv); }
