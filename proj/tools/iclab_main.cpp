#include "iclab/cli.hpp"

int main(int argc, char** argv) { return iclab::cli::dispatch(argc, argv); }
