#pragma once
// Permutations in one-line notation, 0-based: p[i] is the image of i.
//
// Composition is read left to right: perm_compose(a, b) applies a first, then
// b.  Under this convention a right group action with matrices rho satisfies
// rho(perm_compose(a, b)) = rho(a) * rho(b), which is the form all action
// code in this project uses.
#include <vector>

namespace opforge {

using Perm = std::vector<int>;

Perm perm_identity(int n);
Perm perm_compose(const Perm& a, const Perm& b);   // a then b: r[i] = b[a[i]]
Perm perm_inverse(const Perm& p);
int perm_sign(const Perm& p);

// swaps i and i+1
Perm adjacent_transposition(int n, int i);

// all of Sigma_n in lexicographic order (deterministic basis order for Q[Sigma_n])
std::vector<Perm> all_perms(int n);

// p as a left-to-right chain of adjacent transpositions:
// p = s_{w[0]} then s_{w[1]} then ... so rho(p) = rho(s_{w[0]})·rho(s_{w[1]})···
std::vector<int> descent_word(const Perm& p);

// for distinct values: r[t] = rank of vals[t] among all entries (0-based)
Perm ranks(const std::vector<int>& vals);

// Koszul sign of rearranging graded letters (x_0,...,x_{n-1}) into
// (x_{p(0)},...,x_{p(n-1)}): product of (-1)^{|x_{p(t)}||x_{p(u)}|} over
// inversions t<u, p(t)>p(u).  degs are the degrees of the input word.
int graded_place_sign(const Perm& p, const std::vector<int>& degs);

} // namespace opforge
