#include "ntklens/cli.hpp"

int main(int argc, char **argv) { return ntklens::run_cli(argc, argv); }
