#include "proxjobs/cli.hpp"

int main(int argc, char** argv) { return proxjobs::cli::main_impl(argc, argv); }
