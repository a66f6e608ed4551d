#include "cvqpv/cli_report.hpp"

int main(int argc, char** argv) { return cvqpv::cli::main_entry(argc, argv); }
