#include "hbtamp/cli.hpp"

int main(int argc, char** argv) { return hbtamp::cli::main_entry(argc, argv); }
