#pragma once

#include <array>

// Minkowski conventions used throughout: signature (+,-,-,-), eps^{0123} = +1,
// c = 1.  Vectors are stored with upper (contravariant) indices unless a name
// says otherwise.

namespace gbmt::metric {

inline constexpr std::array<double, 4> kEta = {1.0, -1.0, -1.0, -1.0};

// diag(eta); eta_{mu mu} == eta^{mu mu}.
constexpr double eta(int mu) { return kEta[mu]; }

// eps^{abcd} with eps^{0123} = +1.  Lowering all four indices flips the sign.
constexpr int levi_civita(int a, int b, int c, int d) {
  if (a == b || a == c || a == d || b == c || b == d || c == d) return 0;
  const int p[4] = {a, b, c, d};
  int inversions = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] > p[j]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

// Index of the pair (mu, nu), mu < nu, in the order 01 02 03 12 13 23.
constexpr int pair_index(int mu, int nu) {
  constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[mu][nu];
}

inline constexpr std::array<std::array<int, 2>, 6> kPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace gbmt::metric
