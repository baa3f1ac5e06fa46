#pragma once

#include "ainf/complex.hpp"

namespace ainf {

/// Deformation-retract data between a big complex N and a small complex M:
///   f : N -> M,  g : M -> N,  phi : N -> N of shift +1, with
///   fg = 1,  gf + phi d + d phi = 1,  f phi = 0,  phi g = 0,  phi phi = 0.
struct Contraction {
    ComplexPtr big;
    ComplexPtr small;
    ChainMap f;
    ChainMap g;
    ChainMap phi;
};

/// Verifies the five identities degreewise; the failure names the identity,
/// the degree and the offending basis element.
CheckResult check_contraction(const Contraction& c);

/// M = N, f = g = id, phi = 0.
Contraction identity_contraction(const ComplexPtr& n);

struct HomologyContraction {
    ComplexPtr homology;  // zero differential
    Contraction contraction;
};

/// Splits every C_n as B_n ⊕ H_n ⊕ L_n. B_n is spanned by d(e_j) for the pivot
/// columns j of d_{n+1}; H_n by kernel-basis cycles not already in the span
/// (declaration order); L_n by the standard vectors at the pivot columns of d_n.
/// g picks those cycles, f reads the H-coordinates, and phi sends d(e_j) to e_j
/// and kills H_n ⊕ L_n. The homology basis label of a class is "[x]" where x is
/// the free column of its representative.
HomologyContraction homology_contraction(const ComplexPtr& c);

struct PreferredCycle {
    std::string label;
    Chain cycle;
};

/// As above, but the given cycles (in order, per degree) are taken as the first
/// homology representatives. Throws std::invalid_argument when one is not a cycle
/// or is dependent on the boundaries and the earlier choices.
HomologyContraction homology_contraction(const ComplexPtr& c, const std::vector<PreferredCycle>& preferred);

/// dim ker d_n - rank d_{n+1}, computed directly from ranks.
std::size_t betti_number(const ChainComplex& c, int n);

}  // namespace ainf
