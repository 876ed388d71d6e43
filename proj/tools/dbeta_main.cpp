#include "dbeta/cli.hpp"

int main(int argc, char** argv) { return dbeta::cli::main(argc, argv); }
