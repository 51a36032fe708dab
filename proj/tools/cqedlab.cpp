#include "cqed/cli.hpp"

int main(int argc, char** argv) { return cqed::cli::run_cli(argc, argv); }
