#include "opforge/rational.hpp"

namespace opforge {

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Int p(s);
            return Rat(p);
        }
        Int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) throw ParseError("zero denominator in '" + s + "'");
        Rat r(p, q);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + s + "'");
    }
}

std::string rat_str(const Rat& q) {
    return q.get_str();   // mpq_class keeps canonical form, prints "p" or "p/q"
}

size_t int_bits(const Int& z) {
    if (z == 0) return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

} // namespace opforge
