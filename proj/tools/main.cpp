#include "commands.hpp"

int main(int argc, char** argv) { return genum::cli::run(argc, argv); }
