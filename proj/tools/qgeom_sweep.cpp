#include "qgeom/cli.hpp"

int main(int argc, char** argv)
{
    return qgeom::run_cli(argc, argv);
}
