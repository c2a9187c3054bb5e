// Tensor product of two two-dimensional theories with potentials
// x0^2 x1 / 2 + f(x1); prints the degree 4 and 5 part of the product potential.
#include <iostream>

#include "m0n/m0n.hpp"

using m0n::Rational;

static m0n::FrobeniusData theory(const std::vector<Rational>& tail, int order) {
  m0n::FormalPotential p;
  p.dim = 2;
  p.order = order;
  p.coeffs[{2, 1}] = Rational(1, 2);
  for (std::size_t k = 0; k < tail.size(); ++k) p.coeffs[{0, static_cast<int>(k) + 3}] = tail[k];
  return m0n::correlators_from_potential(p, m0n::Matrix{{0, 1}, {1, 0}});
}

int main() {
  const int order = 5;
  const auto a = theory({Rational(1), Rational(1, 3), Rational(-1, 2)}, order);
  const auto b = theory({Rational(-2), Rational(0), Rational(1)}, order);
  m0n::GramCache cache;
  const auto phi = m0n::kunneth_potential(a, b, order, cache);
  const auto product = m0n::correlators_from_potential(phi, m0n::kron(a.metric(), b.metric()));
  std::cout << m0n::wdvv_check(product, order).to_string() << "\n";
  for (const auto& [alpha, c] : phi.coeffs) {
    int deg = 0;
    for (int e : alpha) deg += e;
    if (deg < 4) continue;
    std::cout << "  " << c.get_str() << " * x^(";
    for (std::size_t i = 0; i < alpha.size(); ++i) std::cout << (i ? "," : "") << alpha[i];
    std::cout << ")\n";
  }
}
