#include "ttda/cli.hpp"

int main(int argc, char** argv) { return ttda::cli::run(argc, argv); }
