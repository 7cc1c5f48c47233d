#include "cli_app.hpp"

int main(int argc, char** argv) { return locsnn::cli::run(argc, argv); }
