#include "ltimd/cli.hpp"

int main(int argc, char** argv) { return ltimd::run_cli(argc, argv); }
