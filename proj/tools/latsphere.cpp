#include "latsphere/cli.hpp"

int main(int argc, char** argv)
{
    return latsphere::cli::run(argc, argv);
}
