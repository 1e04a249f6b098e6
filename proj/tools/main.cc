#include "zsg/cli.h"

int main(int argc, char** argv) { return zsg::cli_main(argc, argv); }
