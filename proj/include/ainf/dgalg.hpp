#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ainf/complex.hpp"
#include "ainf/contraction.hpp"

namespace ainf {

/// Sparse coefficient list sorted by basis index.
using SparseChain = SparseMatrix::Column;

SparseChain to_sparse(const Vec& v);
Vec to_dense(Field f, std::size_t n, const SparseChain& s);

/// Sparse linear combination of basis tensors.
using TensorTerms = std::map<Tuple, Scalar>;

void add_term(TensorTerms& terms, const Tuple& t, const Scalar& c);
int tuple_degree(const Tuple& t);

/// Dense offsets of every degree inside one flat numbering of the basis.
class FlatIndex {
public:
    FlatIndex() = default;
    explicit FlatIndex(const GradedBasis& b);
    std::size_t operator()(BasisRef r) const { return offsets_[static_cast<std::size_t>(r.degree - lo_)] + r.index; }
    BasisRef ref(std::size_t flat) const;
    std::size_t size() const { return total_; }

private:
    int lo_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<BasisRef> refs_;
    std::size_t total_ = 0;
};

/// Chain complex with a degree-0 product given by structure constants on basis pairs.
class DGAlgebra {
public:
    explicit DGAlgebra(ComplexPtr complex);

    const ComplexPtr& complex() const { return complex_; }
    Field field() const { return complex_->field(); }

    /// value must live in degree |a| + |b|; zero values erase the entry.
    void set_product(BasisRef a, BasisRef b, const Vec& value);
    Chain product(BasisRef a, BasisRef b) const;
    Chain multiply(const Chain& a, const Chain& b) const;
    /// Nonzero structure constants keyed by (a, b).
    std::map<std::pair<BasisRef, BasisRef>, SparseChain> products() const;

private:
    const SparseChain* lookup(std::size_t a, std::size_t b) const;

    ComplexPtr complex_;
    FlatIndex flat_;
    std::unordered_map<std::uint64_t, SparseChain> table_;
    std::vector<std::vector<std::size_t>> partners_;  // right factors with a stored product, per left factor
};

/// Chain complex with a degree-0 coproduct given on basis elements.
class DGCoalgebra {
public:
    explicit DGCoalgebra(ComplexPtr complex);

    const ComplexPtr& complex() const { return complex_; }
    Field field() const { return complex_->field(); }

    /// Every term must be a pair of total degree |x|.
    void set_coproduct(BasisRef x, const TensorTerms& value);
    const TensorTerms& coproduct(BasisRef x) const;
    const std::map<BasisRef, TensorTerms>& coproducts() const { return delta_; }

private:
    ComplexPtr complex_;
    std::map<BasisRef, TensorTerms> delta_;
};

/// Associativity on basis triples and Leibniz on basis pairs.
CheckResult check_dga(const DGAlgebra& a);
/// Coassociativity and Δ∂ = (∂⊗1 + 1⊗∂)Δ with Koszul signs, on basis elements.
CheckResult check_dgc(const DGCoalgebra& c);

/// Linear dual on the finite window: degrees negate, matrices transpose, labels are kept.
DGCoalgebra dualize(const DGAlgebra& a);
DGAlgebra dualize(const DGCoalgebra& c);

// ------------------------------------------------------------ A∞ structures

/// Multilinear map carrier^{⊗arity} -> target of homological degree `degree`,
/// stored on basis tuples. Absent tuples evaluate to zero.
class MultilinearMap {
public:
    MultilinearMap(ComplexPtr source, ComplexPtr target, std::size_t arity, int degree);

    const ComplexPtr& source() const { return source_; }
    const ComplexPtr& target() const { return target_; }
    std::size_t arity() const { return arity_; }
    int degree() const { return degree_; }
    Field field() const { return source_->field(); }

    int output_degree(const Tuple& t) const { return tuple_degree(t) + degree_; }
    void set(const Tuple& t, const Vec& value);
    void set(const Tuple& t, SparseChain value);
    Chain at(const Tuple& t) const;
    const SparseChain* find(const Tuple& t) const;
    const std::map<Tuple, SparseChain>& values() const { return values_; }
    bool is_zero() const { return values_.empty(); }

private:
    ComplexPtr source_;
    ComplexPtr target_;
    std::size_t arity_;
    int degree_;
    std::map<Tuple, SparseChain> values_;
};

/// carrier -> carrier^{⊗arity} of homological degree `degree`, stored on basis elements.
class CoOperation {
public:
    CoOperation(ComplexPtr carrier, std::size_t arity, int degree);

    const ComplexPtr& carrier() const { return carrier_; }
    std::size_t arity() const { return arity_; }
    int degree() const { return degree_; }

    void set(BasisRef x, TensorTerms value);
    const TensorTerms& at(BasisRef x) const;
    const std::map<BasisRef, TensorTerms>& values() const { return values_; }
    bool is_zero() const { return values_.empty(); }

private:
    ComplexPtr carrier_;
    std::size_t arity_;
    int degree_;
    std::map<BasisRef, TensorTerms> values_;
};

/// Basis tuples on which operations are evaluated. Unbounded unless min_total is
/// set; then only tuples of classes in homological degree <= -1 whose total degree
/// is >= min_total are admitted. Substituting the output of an inner m_s (s >= 2)
/// into an admitted tuple raises its total degree by s - 2 and yields an input of
/// degree <= -2, so Stasheff sums and the transfer recursion close up on admitted
/// tuples.
struct TupleWindow {
    std::optional<int> min_total;

    bool admits_input(int degree) const { return !min_total || degree <= -1; }
    bool admits(const Tuple& t) const;
};

/// Basis tuples of the given arity admitted by the window whose value under an
/// operation of degree op_degree lands in `outputs` (when given), in lexicographic order.
std::vector<Tuple> admitted_tuples(const ChainComplex& c, std::size_t arity, const TupleWindow& w, int op_degree = 0,
                                   std::optional<DegreeWindow> outputs = std::nullopt);

enum class StructureKind { algebra, coalgebra };

/// Operations m_n (algebra) or Δ_n (coalgebra) on a carrier, certified through
/// certified_arity. Signs: St_n is
///   Σ_{r+s+t=n} (-1)^{Σ_{l<=r}(|x_l|+1)} m_{r+1+t}(x_1..x_r, m_s(x_{r+1}..x_{r+s}), ..) = 0
/// with m_n of degree n-2. A dg-algebra embeds as m_1 = ∂, m_2(x,y) = (-1)^{|x|+1} xy.
/// For coalgebras, D_1 = -Δ_1 and D_i(x) = -(-1)^{Σ_l (i-1-l)|y_l|} Δ_i(x) on each
/// output term y_0⊗..⊗y_{i-1}; the D_i assemble into a square-zero derivation of the
/// tensor algebra on the desuspension, which is the co-Stasheff condition.
struct AInfinityStructure {
    ComplexPtr carrier;
    StructureKind kind = StructureKind::algebra;
    std::map<std::size_t, MultilinearMap> ops;   // algebra kind
    std::map<std::size_t, CoOperation> coops;    // coalgebra kind
    std::size_t certified_arity = 0;
    TupleWindow window;
    /// Set when a gap criterion shows every higher operation may be taken to be zero.
    std::optional<std::size_t> gap_q;

    bool complete() const { return gap_q.has_value(); }
};

/// m_1 = ∂, m_2(x,y) = (-1)^{|x|+1} xy, and zero operations of arity 3..max_arity.
AInfinityStructure strict_structure(const DGAlgebra& a, std::size_t max_arity = 3);
/// Δ_1 = ∂, Δ_2 = Δ, and zero operations of arity 3..max_arity.
AInfinityStructure strict_structure(const DGCoalgebra& c, std::size_t max_arity = 3);

/// Converts one Δ_i term to the derivation component D_i and back (the sign is an involution).
Scalar coalgebra_term_sign(Field f, const Tuple& output);

struct StasheffDefect {
    std::optional<MultilinearMap> algebra;   // degree n-3 on admitted tuples
    std::optional<CoOperation> coalgebra;    // in derivation form

    bool is_zero() const;
    /// Names the first tuple or basis element with a nonzero defect.
    std::string witness() const;
};

/// Evaluates St_n on every admitted basis tuple (or basis element for coalgebras).
/// Throws std::invalid_argument when an operation of arity 2..n-1 is missing, or
/// when m_n is missing while m_1 is nonzero.
StasheffDefect stasheff_defect(const AInfinityStructure& s, std::size_t n);

/// f_n : H^{⊗n} -> A of degree n-1, keyed by arity.
struct AInfinityMorphism {
    std::map<std::size_t, MultilinearMap> components;
};

// ------------------------------------------------------ endomorphism algebras

/// Complex with commuting degree-0 actions (e.g. a group generator acting on a
/// resolution). actions[k][n] acts on C_n.
struct EquivariantComplex {
    ComplexPtr complex;
    std::vector<std::map<int, SparseMatrix>> actions;
};

/// Hom(F, F) restricted to maps F_i -> F_j with 0 <= i - j <= window_top that
/// commute with every action: the degree >= 0 part of the endomorphism algebra in
/// cohomological grading, modulo maps of cohomological degree > window_top. The
/// map F_i -> F_j has homological degree j - i; D(φ) = ∂φ - (-1)^{|φ|} φ∂;
/// the product is composition, product(a, b) = a ∘ b.
/// Throws std::invalid_argument when window_top < 1.
DGAlgebra endomorphism_dga(const EquivariantComplex& f, int window_top);
DGAlgebra endomorphism_dga(const ComplexPtr& f, int window_top);

/// The element of endomorphism_dga(f, window_top) of cohomological degree r whose
/// component F_i -> F_{i-r} is components[i] (missing components are zero). Throws
/// std::invalid_argument when a component does not commute with the actions.
Chain endomorphism_element(const EquivariantComplex& f, int window_top, int r, const std::map<int, SparseMatrix>& components);

/// The periodic resolution of the trivial module over F_p[C_p], truncated at
/// homological degree top: F_n = F_p[C_p] with basis T^0..T^{p-1}, d = T - 1 from odd
/// degrees and d = 1 + T + .. + T^{p-1} from even degrees >= 2. The action is
/// multiplication by T.
EquivariantComplex cyclic_group_resolution(std::uint32_t p, int top);

/// Chain-map representatives y^a x^e (cohomological degree 2a + e <= up_to) in
/// endomorphism_dga(res, window_top) for res = cyclic_group_resolution(p, ..):
/// y is the periodicity map (identity F_{i+2} -> F_i) and x is (-1)^i on F_i -> F_{i-1}
/// for odd i and (-1)^i (T - 1)^{p-2} for even i. These commute strictly, so they
/// multiply like the classes they represent (x^2 is a boundary for p odd).
std::vector<PreferredCycle> cyclic_group_representatives(const EquivariantComplex& res, int window_top, int up_to);

}  // namespace ainf
