#include "pvar/cli.hpp"

int main(int argc, char** argv) { return pvar::cli::execute(argc, argv); }
