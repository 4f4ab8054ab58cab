#include "membrane/cli.hpp"

int main(int argc, char** argv) { return membrane::dispatch(argc, argv); }
