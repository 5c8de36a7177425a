#include <fracvc/cli.hpp>

int main(int argc, char** argv) { return fracvc::cli::main(argc, argv); }
