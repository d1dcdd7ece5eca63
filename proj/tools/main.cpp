#include "mflq/cli.hpp"

int main(int argc, char** argv) {
    return mflq::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
