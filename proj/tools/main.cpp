#include "cli.hpp"

int main(int argc, char** argv) { return tweetsense::cli::run(argc, argv); }
