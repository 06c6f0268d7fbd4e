#include "evocad/cli/app.hpp"

int main(int argc, char **argv) { return evocad::cli::main(argc, argv); }
