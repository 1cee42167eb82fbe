#include "opforge/perm.hpp"

#include <algorithm>
#include <numeric>

namespace opforge {

Perm perm_identity(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm perm_compose(const Perm& a, const Perm& b) {
    Perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
    return r;
}

Perm perm_inverse(const Perm& p) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[p[i]] = (int)i;
    return r;
}

int perm_sign(const Perm& p) {
    int inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

Perm adjacent_transposition(int n, int i) {
    Perm p = perm_identity(n);
    std::swap(p[i], p[i + 1]);
    return p;
}

std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = perm_identity(n);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<int> descent_word(const Perm& p) {
    // peel descents off the front: if q has a descent at i then
    // q = s_i then q' where q' is q with entries i, i+1 swapped
    std::vector<int> w;
    Perm q = p;
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t i = 0; i + 1 < q.size(); ++i)
            if (q[i] > q[i + 1]) {
                w.push_back((int)i);
                std::swap(q[i], q[i + 1]);
                moved = true;
                break;
            }
    }
    return w;
}

Perm ranks(const std::vector<int>& vals) {
    std::vector<int> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    Perm r(vals.size());
    for (size_t t = 0; t < order.size(); ++t) r[order[t]] = (int)t;
    return r;
}

int graded_place_sign(const Perm& p, const std::vector<int>& degs) {
    int par = 0;
    for (size_t t = 0; t < p.size(); ++t)
        for (size_t u = t + 1; u < p.size(); ++u)
            if (p[t] > p[u]) par += (degs[p[t]] & 1) * (degs[p[u]] & 1);
    return par % 2 == 0 ? 1 : -1;
}

} // namespace opforge
