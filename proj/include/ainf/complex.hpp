#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/sparse_matrix.hpp"

namespace ainf {

/// A basis element: homological degree plus position within that degree.
struct BasisRef {
    int degree = 0;
    std::size_t index = 0;
    friend auto operator<=>(const BasisRef&, const BasisRef&) = default;
};

using Tuple = std::vector<BasisRef>;

/// Inclusive degree range.
struct DegreeWindow {
    int lo = 0;
    int hi = -1;
    bool contains(int d) const { return lo <= d && d <= hi; }
    bool empty() const { return hi < lo; }
    friend bool operator==(const DegreeWindow&, const DegreeWindow&) = default;
};

/// Per-degree ordered labels over a finite degree range. Labels are opaque and
/// unique within a degree; declaration order fixes every pivot choice downstream.
class GradedBasis {
public:
    GradedBasis() = default;
    GradedBasis(int min_degree, int max_degree);

    int min_degree() const { return min_; }
    int max_degree() const { return max_; }
    DegreeWindow window() const { return {min_, max_}; }
    std::size_t dim(int degree) const;
    std::size_t total_dim() const;

    /// Appends a label; grows the degree range if needed.
    BasisRef add(int degree, const std::string& label);
    const std::string& label(BasisRef b) const;
    const std::vector<std::string>& labels(int degree) const;
    std::optional<BasisRef> find(const std::string& label) const;
    std::optional<BasisRef> find(int degree, const std::string& label) const;
    std::vector<BasisRef> refs(int degree) const;
    std::vector<BasisRef> all_refs() const;

    friend bool operator==(const GradedBasis&, const GradedBasis&) = default;

private:
    int min_ = 0;
    int max_ = -1;
    std::vector<std::vector<std::string>> labels_;
};

/// A homogeneous element of a graded space.
struct Chain {
    int degree = 0;
    Vec coeffs;

    bool is_zero() const { return ainf::is_zero(coeffs); }
    friend bool operator==(const Chain& a, const Chain& b) { return a.degree == b.degree && a.coeffs == b.coeffs; }
};

/// Homologically graded complex; d(n) : C_n -> C_{n-1}.
class ChainComplex {
public:
    ChainComplex(Field f, GradedBasis basis);
    ChainComplex(Field f, GradedBasis basis, std::map<int, SparseMatrix> differentials);

    Field field() const { return field_; }
    const GradedBasis& basis() const { return basis_; }
    int min_degree() const { return basis_.min_degree(); }
    int max_degree() const { return basis_.max_degree(); }
    std::size_t dim(int n) const { return basis_.dim(n); }

    /// Zero matrix of the right shape outside the stored range.
    SparseMatrix differential(int n) const;
    const SparseMatrix* stored_differential(int n) const;

    Chain zero(int degree) const { return Chain{degree, zero_vec(field_, dim(degree))}; }
    Chain basis_chain(BasisRef b) const;
    Chain boundary(const Chain& c) const;

private:
    Field field_;
    GradedBasis basis_;
    std::vector<SparseMatrix> d_;  // indexed by n - min_degree
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

struct CheckResult {
    bool ok = true;
    std::string failure;
    explicit operator bool() const { return ok; }
    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

/// Passes iff d(n-1) d(n) = 0 for every degree; names degree and basis column otherwise.
CheckResult verify_complex(const ChainComplex& c);

/// Degree-shifted map: component(n) : source_n -> target_{n+shift}.
class ChainMap {
public:
    ChainMap(ComplexPtr source, ComplexPtr target, int shift);
    static ChainMap identity(ComplexPtr c);
    static ChainMap zero(ComplexPtr source, ComplexPtr target, int shift);

    const ComplexPtr& source() const { return source_; }
    const ComplexPtr& target() const { return target_; }
    int shift() const { return shift_; }
    Field field() const { return source_->field(); }

    const SparseMatrix& component(int n) const;
    void set_component(int n, SparseMatrix m);
    Chain apply(const Chain& c) const;
    Chain apply(BasisRef b) const;

    ChainMap operator-() const;
    ChainMap& operator+=(const ChainMap& o);
    ChainMap& operator-=(const ChainMap& o);
    friend ChainMap operator+(ChainMap a, const ChainMap& b) { return a += b; }
    friend ChainMap operator-(ChainMap a, const ChainMap& b) { return a -= b; }
    bool is_zero() const;
    /// Compares components only; sources/targets must have equal shapes.
    bool same_components(const ChainMap& o) const;

private:
    ComplexPtr source_;
    ComplexPtr target_;
    int shift_;
    std::vector<SparseMatrix> comps_;  // indexed by n - source min degree
};

/// a ∘ b. Throws std::invalid_argument on a shape mismatch.
ChainMap compose(const ChainMap& a, const ChainMap& b);

/// The differential of c as a map of shift -1.
ChainMap differential_map(const ComplexPtr& c);

/// Checks d_target ∘ φ = (-1)^shift φ ∘ d_source on every degree.
CheckResult verify_chain_map(const ChainMap& m);

/// Sign of reordering graded symbols: result[k] = input[perm[k]].
/// (-1) raised to the number of inverted pairs with both degrees odd.
Scalar koszul_sign(Field f, const std::vector<int>& degrees, const std::vector<std::size_t>& perm);

/// k-fold tensor power with the Koszul differential sum_j ±1⊗..⊗d⊗..⊗1.
/// Basis labels are "a|b|c"; the index tuple of each basis element is recoverable.
struct TensorPower {
    ComplexPtr factor;
    ComplexPtr complex;
    std::map<Tuple, BasisRef> index;     // factor tuple -> tensor basis element
    std::map<BasisRef, Tuple> factors;   // inverse
};

TensorPower tensor_power(const ComplexPtr& c, std::size_t k);

/// φ_1 ⊗ ... ⊗ φ_k on the tensor power, with (φ_1⊗...⊗φ_k)(x_1⊗...⊗x_k) =
/// (-1)^{sum_j shift_j (|x_1|+...+|x_{j-1}|)} φ_1 x_1 ⊗ ... ⊗ φ_k x_k.
ChainMap tensor_map(const std::vector<ChainMap>& maps, const TensorPower& source, const TensorPower& target);

}  // namespace ainf
