#include "plsec/cli.hpp"

int main(int argc, char** argv) { return plsec::run_cli(argc, argv); }
