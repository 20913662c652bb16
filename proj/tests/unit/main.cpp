#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "../support/testers.hpp"

#include <string>

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a.rfind("--cli=", 0) == 0) testers::cli_path() = a.substr(6);
    }
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
