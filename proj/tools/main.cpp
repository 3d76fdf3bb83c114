#include "metricga/cli.hpp"

int main(int argc, char** argv) { return metricga::cli::main_entry(argc, argv); }
