#include "folkbangla/cli.hpp"

int main(int argc, char** argv) { return folkbangla::cli::dispatch(argc, argv); }
