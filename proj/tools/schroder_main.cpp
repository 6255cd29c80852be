#include "schroder/cli.hpp"

int main(int argc, char** argv) { return schroder::cli::main(argc, argv); }
