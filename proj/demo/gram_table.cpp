// Prints the tree basis of H*(M_{0,n}) and its Gram matrix for n = 3..6 (or the n given).
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "m0n/m0n.hpp"

int main(int argc, char** argv) {
  int lo = 3, hi = 6;
  if (argc > 1) lo = hi = std::atoi(argv[1]);
  for (int n = lo; n <= hi; ++n) {
    const m0n::PairingMatrices pm = m0n::gram(n);
    std::cout << "n = " << n << ", |B_n| = " << pm.size() << "\n";
    for (int i = 0; i < pm.size(); ++i) std::cout << "  [" << i << "] " << pm.order[i].to_string() << "\n";
    if (pm.size() > 12) {
      std::cout << "  (Gram matrix omitted, " << pm.M.nonzero_count() << " nonzero entries)\n\n";
      continue;
    }
    for (int i = 0; i < pm.size(); ++i) {
      std::cout << "  ";
      for (int j = 0; j < pm.size(); ++j) std::cout << std::setw(3) << pm.M(i, j).get_str();
      std::cout << "\n";
    }
    std::cout << "\n";
  }
}
