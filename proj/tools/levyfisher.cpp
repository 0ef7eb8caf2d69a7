#include "levyfisher/cli.hpp"

int main(int argc, char** argv) { return levyfisher::cli_main(argc, argv); }
