#include "cli.hpp"

int main(int argc, char** argv)
{
    return attractor::cli::cli_main(argc, argv);
}
