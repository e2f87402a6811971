#include "bregbench/cli.hpp"

int main(int argc, char** argv) { return bregbench::bench_main(argc, argv); }
