#include "ancient/commands.hpp"

int main(int argc, char** argv) { return ancient::run_cli(argc, argv); }
