// Acceptance harness: runs the end-to-end self-test suite and prints one
// pass/fail line per criterion. Exit code 0 iff every criterion passes.
#include <iostream>

#include "rreal/selftest.hpp"

int main() { return rreal::run_selftest(std::cout) ? 0 : 1; }
