#include "mss/cli.hpp"

int main(int argc, char** argv) { return mss::run_cli(argc, argv); }
