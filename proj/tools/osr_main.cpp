#include "osr/harness.hpp"

int main(int argc, char** argv) { return osr::cli_main(argc, argv); }
