#include "cli.hpp"

int main(int argc, char** argv) { return blotto::cli::run(argc, argv); }
