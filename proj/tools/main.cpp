#include "fzhealth/cli.hpp"

int main(int argc, char** argv) { return fzh::run_cli(argc, argv); }
