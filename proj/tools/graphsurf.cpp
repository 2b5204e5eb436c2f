#include "graphsurf/cli.hpp"

int main(int argc, char** argv) { return graphsurf::cli::run_main(argc, argv); }
