#include "diracgap/cli.hpp"

int main(int argc, char** argv) { return diracgap::cli::main_entry(argc, argv); }
