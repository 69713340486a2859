#include <cstring>
#include <iostream>

#include "isoc/acceptance.hpp"

int main(int argc, char** argv) {
    isoc::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
    }
    bool ok = isoc::run_acceptance(std::cout, opts);
    return ok ? 0 : 1;
}
