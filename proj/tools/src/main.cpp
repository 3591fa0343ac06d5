#include "cli.hpp"

int main(int argc, char** argv) { return safe::cli::run(argc, argv); }
