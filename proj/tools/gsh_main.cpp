#include "gsh/cli.hpp"

int main(int argc, char** argv) { return gsh::cli::run(argc, argv); }
