// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <iostream>

#include "ffbias/acceptance.hpp"

int main(int argc, char** argv) {
    ffbias::acceptance::Options opt;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") opt.quick = true;
    bool all = true;
    ffbias::acceptance::run_all(opt, [&](const ffbias::acceptance::CriterionResult& r) {
        all = all && r.passed;
        std::cout << ffbias::acceptance::format_line(r) << std::endl;
    });
    return all ? 0 : 1;
}
