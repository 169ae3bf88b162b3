#include "qg/qg.hpp"

int main(int argc, char** argv) {
    return qg::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
