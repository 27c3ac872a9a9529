#include "kinlab/runner/runner.hpp"

int main(int argc, char** argv) { return kinlab::runner::cli_main(argc, argv); }
