#include "gmap4/cli.hpp"

int main(int argc, char** argv) { return gmap4::cli::run(argc, argv); }
