#include "iqpv/cli.hpp"

int main(int argc, char** argv) { return iqpv::run_cli(argc, argv); }
