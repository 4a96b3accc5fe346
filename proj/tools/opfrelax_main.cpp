#include "opfrelax/cli.hpp"

int main(int argc, char** argv) { return opfrelax::run_cli(argc, argv); }
