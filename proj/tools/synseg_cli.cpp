#include "synseg/cli.hpp"

int main(int argc, char** argv) { return synseg::dispatch(argc, argv); }
