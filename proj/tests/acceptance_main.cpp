// Acceptance suite driver: one pass/fail line per criterion, nonzero exit on
// any failure.

#include <iostream>

#include "rhlab/acceptance.hpp"

int main() {
  const auto results = rhlab::run_acceptance();
  return rhlab::print_acceptance(results, std::cout) ? 0 : 1;
}
