#include "zonosvm/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    zonosvm::RunConfig config;
    try {
        config = zonosvm::parse_args(argc, argv);
    } catch (const CLI::CallForHelp&) {
        return zonosvm::kExitOk;  // help text already printed
    } catch (const CLI::CallForVersion&) {
        return zonosvm::kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return zonosvm::kExitInput;
    }
    return zonosvm::run(config, std::cout, std::cerr);
}
