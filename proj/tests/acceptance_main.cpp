#include <iostream>

#include "CLI11.hpp"

#include "acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qlift acceptance suite"};
    std::vector<int> only;
    bool quick = false;
    std::uint64_t seed = 2024;
    app.add_option("--criterion", only, "criteria to run (1-8); default all")->check(CLI::Range(1, 8));
    app.add_flag("--quick", quick, "scaled-down runs");
    app.add_option("--seed", seed, "master seed");
    CLI11_PARSE(app, argc, argv);

    qlift::AcceptanceOptions opt;
    opt.only.insert(only.begin(), only.end());
    opt.quick = quick;
    opt.seed = seed;
    std::cout << "seed " << seed << std::endl;
    const auto lines = qlift::run_acceptance(opt, std::cout, std::cerr);
    bool all = true;
    for (const auto& l : lines) all = all && l.pass;
    return all ? 0 : 1;
}
