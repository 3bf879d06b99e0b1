#include <iostream>

#include "qmetro/acceptance.hpp"

int main() {
  const int failures = qmetro::run_acceptance({}, std::cout);
  std::cout << (failures ? "acceptance: FAILED " : "acceptance: all criteria passed") ;
  if (failures) std::cout << failures << " criteria";
  std::cout << "\n";
  return failures ? 1 : 0;
}
