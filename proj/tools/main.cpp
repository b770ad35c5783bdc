#include <string>
#include <vector>

#include "bosegas/cli.hpp"

int main(int argc, char** argv) { return bosegas::cli::run(std::vector<std::string>(argv + 1, argv + argc)); }
