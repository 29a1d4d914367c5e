#include <cstdio>
#include <string>
#include <vector>

#include "dgtot/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    bool json = false;
    for (auto& a : args)
        if (a == "--format=json") json = true;
    for (size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--format" && args[i + 1] == "json") json = true;
    auto res = dgtot::cli::run_args(args);
    if (json)
        std::printf("%s\n", res.json.dump(2).c_str());
    else
        std::fputs(res.text.c_str(), stdout);
    return res.exit_code;
}
