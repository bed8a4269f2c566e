#include "gtd_cli.hpp"

int main(int argc, char** argv) { return gtd::cli::run(argc, argv, std::cout, std::cerr); }
