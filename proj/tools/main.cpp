#include <string>
#include <vector>

#include "smoothiso/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return smoothiso::run(args);
}
