#include "uddlab/cli.hpp"

int main(int argc, char** argv) { return uddlab::cli::run(argc, argv); }
