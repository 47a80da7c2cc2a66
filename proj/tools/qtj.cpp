#include "qtj/cli/cli.hpp"

int main(int argc, char **argv) { return qtj::cli::run(argc, argv); }
