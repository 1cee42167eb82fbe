#pragma once
// The convolution algebra Hom_Sigma(C, P) of equivariant maps from a
// conilpotent cooperad to an operad, with the star product
// gamma_(1) (f o_(1) g) Delta_(1) and the differential d_P f - (-1)^|f| f d_C.
// A Maurer-Cartan element of degree -1 vanishing on weight 0 is a twisting
// morphism; it twists the differentials of the composite products C o P,
// P o C and the two-sided P o C o P, and the morphism is Koszul when all
// three are acyclic over the expected targets, arity by arity.
#include <map>

#include "opforge/opcoop.hpp"

namespace opforge {

// homogeneous element of Hom_Sigma(C, P): one flat matrix C(n) -> P(n) per
// arity, raising degree by deg; absent arities are zero
struct ConvolutionElement {
    int degree = 0;
    std::map<int, RationalMatrix> comp;
};

// validates shapes against the flat bases, the uniform degree shift, and
// equivariance on the Coxeter generators; drops zero blocks
ConvolutionElement make_convolution_element(const Cooperad& C, const Operad& P, int degree,
                                            std::map<int, RationalMatrix> comp);

ConvolutionElement star(const Cooperad& C, const Operad& P, const ConvolutionElement& f,
                        const ConvolutionElement& g);

ConvolutionElement differential(const Cooperad& C, const Operad& P,
                                const ConvolutionElement& f);

// per-arity Maurer-Cartan residual d(alpha) + alpha*alpha, zero blocks
// dropped; ok iff every residual vanishes
struct MCCertificate {
    bool ok = false;
    std::map<int, RationalMatrix> residual;
};
MCCertificate is_twisting(const Cooperad& C, const Operad& P, const ConvolutionElement& alpha);

struct TwistingMorphism {
    Cooperad source;
    Operad target;
    ConvolutionElement alpha;
};
// degree -1, vanishing on the weight-0 part, Maurer-Cartan; NotTwisting
// otherwise
TwistingMorphism make_twisting_morphism(Cooperad source, Operad target,
                                        ConvolutionElement alpha);

// the universal example: the one-dimensional sign classes onto the binary
// bracket of Lie, zero in every other arity
TwistingMorphism kappa(int max_arity);

// counit-augmented cofree/free pair on a complex concentrated in degree 0:
// the source is the two-term cooperad I + V[1], included into T(V) by
// dropping the shift.  Arity 1 on both sides, weight-truncated at max_weight.
TwistingMorphism free_cofree_twist(const ChainComplex& V, int max_weight);

// twisted composite product: the underlying trees, the twist summand of the
// differential (arity -> source degree -> matrix between coinvariant bases),
// and the assembled per-arity complexes.  The complexes go through the
// ChainComplex constructor, so d^2 = 0 is asserted on every instance.
struct TwistedComplexes {
    CompositeData mod;
    std::map<int, std::map<int, RationalMatrix>> twist;
    std::map<int, ChainComplex> cx;
};
// P o_a C, C o_a P, P o_a C o_a P; all three require alpha to pass
// is_twisting and throw NotTwisting otherwise
TwistedComplexes twisted_left(const Operad& P, const Cooperad& C,
                              const ConvolutionElement& alpha, int max_arity);
TwistedComplexes twisted_right(const Cooperad& C, const Operad& P,
                               const ConvolutionElement& alpha, int max_arity);
TwistedComplexes two_sided(const Operad& P, const Cooperad& C,
                           const ConvolutionElement& alpha, int max_arity);

// for an arbitrary equivariant alpha of degree -1, not necessarily
// Maurer-Cartan: checks that the square of the twisted differential equals
// the twist induced by the residual d(alpha) + alpha*alpha, on both C o_a P
// and P o_a C.  (Degree -1 is where the residual is homogeneous: the two
// summands have degrees |alpha|-1 and 2|alpha|.)  This pins the differential
// formulas independently of the Maurer-Cartan corollary.
bool twisted_square_check(const Cooperad& C, const Operad& P,
                          const ConvolutionElement& alpha, int max_arity);

// arity-wise Koszul criterion: H(C o_a P)(n) and H(P o_a C)(n) against I(n),
// H(P o_a C o_a P)(n) against H(P(n)); the three verdicts are reported along
// with their agreement.  With max_weight >= 0 the homology is taken weight
// piece by weight piece through that bound: on weight-truncated pairs the
// composite overshoots the truncation by one weight, and the overshoot
// supports spurious classes, so the comparison stays inside the weights the
// truncated model represents faithfully.  Unweighted complexes sit in weight
// 0 and are unaffected.
struct KoszulArityVerdict {
    bool c_circ_p = false, p_circ_c = false, two_sided = false, agree = false;
    std::map<int, int> h_c_circ_p, h_p_circ_c, h_two_sided, h_target;
};
struct KoszulReport {
    bool ok = false;
    std::map<int, KoszulArityVerdict> arity;
};
KoszulReport koszul_check(const TwistingMorphism& t, int max_arity, int max_weight = -1);

} // namespace opforge
