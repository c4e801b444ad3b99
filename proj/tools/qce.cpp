#include "qce_cli.hpp"

int main(int argc, char** argv) { return qce::cli::run(argc, argv); }
