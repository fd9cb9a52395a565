#include "adha/cli.hpp"

int main(int argc, char** argv) { return adha::cli::run(argc, argv); }
