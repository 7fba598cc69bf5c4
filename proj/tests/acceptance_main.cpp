#include <iostream>

#include "bttn/acceptance.hpp"

int main() {
    const int failures = bttn::acceptance::run_all(std::cout);
    return failures == 0 ? 0 : 1;
}
