#include "subdense/cli.hpp"

int main(int argc, char** argv) { return subdense::run(argc, argv); }
