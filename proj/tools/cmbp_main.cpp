#include "cmbp/cli.hpp"

int main(int argc, char** argv) { return cmbp::cli::run(argc, argv); }
