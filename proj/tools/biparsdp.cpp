#include "biparsdp/cli.hpp"

int main(int argc, char** argv) { return biparsdp::cli::run(argc, argv); }
