#include "mee/cli.hpp"

int main(int argc, char** argv) { return mee::cli_main(argc, argv); }
