#include "onsflow/runner.hpp"

int main(int argc, char** argv) { return onsflow::cli_main(argc, argv); }
