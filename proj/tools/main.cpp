#include "cli_app.hpp"

int main(int argc, char** argv) { return tripchoice::cli::main_entry(argc, argv); }
