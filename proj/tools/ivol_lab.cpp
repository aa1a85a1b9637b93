#include "ivlab/cli.hpp"

int main(int argc, char** argv) { return ivlab::cli::main(argc, argv); }
