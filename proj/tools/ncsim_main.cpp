#include "ncsim/cli.hpp"

int main(int argc, char** argv) { return ncsim::cli::dispatch(argc, argv); }
