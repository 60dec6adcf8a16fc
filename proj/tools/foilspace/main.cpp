#include "foilspace/app.hpp"

int main(int argc, char** argv) { return foilspace::cli::run_cli(argc, argv); }
