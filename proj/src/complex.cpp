#include "ainf/complex.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ainf {

// ---------------------------------------------------------------- GradedBasis

GradedBasis::GradedBasis(int min_degree, int max_degree) : min_(min_degree), max_(max_degree) {
    if (max_ >= min_) labels_.resize(static_cast<std::size_t>(max_ - min_ + 1));
}

std::size_t GradedBasis::dim(int degree) const {
    if (degree < min_ || degree > max_) return 0;
    return labels_[static_cast<std::size_t>(degree - min_)].size();
}

std::size_t GradedBasis::total_dim() const {
    std::size_t n = 0;
    for (const auto& l : labels_) n += l.size();
    return n;
}

BasisRef GradedBasis::add(int degree, const std::string& label) {
    if (max_ < min_) {
        min_ = max_ = degree;
        labels_.assign(1, {});
    }
    while (degree < min_) {
        labels_.insert(labels_.begin(), std::vector<std::string>{});
        --min_;
    }
    while (degree > max_) {
        labels_.emplace_back();
        ++max_;
    }
    auto& slot = labels_[static_cast<std::size_t>(degree - min_)];
    if (std::find(slot.begin(), slot.end(), label) != slot.end())
        throw std::invalid_argument("duplicate basis label '" + label + "' in degree " + std::to_string(degree));
    slot.push_back(label);
    return BasisRef{degree, slot.size() - 1};
}

const std::string& GradedBasis::label(BasisRef b) const {
    return labels(b.degree).at(b.index);
}

const std::vector<std::string>& GradedBasis::labels(int degree) const {
    static const std::vector<std::string> empty;
    if (degree < min_ || degree > max_) return empty;
    return labels_[static_cast<std::size_t>(degree - min_)];
}

std::optional<BasisRef> GradedBasis::find(const std::string& label) const {
    for (int d = min_; d <= max_; ++d)
        if (auto r = find(d, label)) return r;
    return std::nullopt;
}

std::optional<BasisRef> GradedBasis::find(int degree, const std::string& label) const {
    const auto& l = labels(degree);
    auto it = std::find(l.begin(), l.end(), label);
    if (it == l.end()) return std::nullopt;
    return BasisRef{degree, static_cast<std::size_t>(it - l.begin())};
}

std::vector<BasisRef> GradedBasis::refs(int degree) const {
    std::vector<BasisRef> out;
    for (std::size_t i = 0; i < dim(degree); ++i) out.push_back({degree, i});
    return out;
}

std::vector<BasisRef> GradedBasis::all_refs() const {
    std::vector<BasisRef> out;
    for (int d = min_; d <= max_; ++d)
        for (std::size_t i = 0; i < dim(d); ++i) out.push_back({d, i});
    return out;
}

// --------------------------------------------------------------- ChainComplex

ChainComplex::ChainComplex(Field f, GradedBasis basis) : field_(f), basis_(std::move(basis)) {
    for (int n = min_degree(); n <= max_degree(); ++n) d_.emplace_back(field_, dim(n - 1), dim(n));
}

ChainComplex::ChainComplex(Field f, GradedBasis basis, std::map<int, SparseMatrix> differentials)
    : ChainComplex(f, std::move(basis)) {
    for (auto& [n, m] : differentials) {
        if (n < min_degree() || n > max_degree()) {
            if (!m.is_zero()) throw std::invalid_argument("differential outside the degree range");
            continue;
        }
        if (m.rows() != dim(n - 1) || m.cols() != dim(n))
            throw std::invalid_argument("differential in degree " + std::to_string(n) + " has the wrong shape");
        if (!(m.field() == f)) throw std::invalid_argument("differential over the wrong field");
        d_[static_cast<std::size_t>(n - min_degree())] = std::move(m);
    }
}

SparseMatrix ChainComplex::differential(int n) const {
    if (const auto* m = stored_differential(n)) return *m;
    return SparseMatrix(field_, dim(n - 1), dim(n));
}

const SparseMatrix* ChainComplex::stored_differential(int n) const {
    if (n < min_degree() || n > max_degree()) return nullptr;
    return &d_[static_cast<std::size_t>(n - min_degree())];
}

Chain ChainComplex::basis_chain(BasisRef b) const {
    return Chain{b.degree, unit_vec(field_, dim(b.degree), b.index)};
}

Chain ChainComplex::boundary(const Chain& c) const {
    if (const auto* m = stored_differential(c.degree)) return Chain{c.degree - 1, m->apply(c.coeffs)};
    return zero(c.degree - 1);
}

CheckResult verify_complex(const ChainComplex& c) {
    for (int n = c.min_degree() + 1; n <= c.max_degree(); ++n) {
        const SparseMatrix dd = c.differential(n - 1) * c.differential(n);
        for (std::size_t col = 0; col < dd.cols(); ++col) {
            if (!dd.column(col).empty())
                return CheckResult::fail("d∘d ≠ 0 at degree " + std::to_string(n) + " on basis element '" +
                                         c.basis().label({n, col}) + "'");
        }
    }
    return CheckResult::pass();
}

// ------------------------------------------------------------------- ChainMap

ChainMap::ChainMap(ComplexPtr source, ComplexPtr target, int shift)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift) {
    if (!(source_->field() == target_->field())) throw std::invalid_argument("chain map between different fields");
    for (int n = source_->min_degree(); n <= source_->max_degree(); ++n)
        comps_.emplace_back(source_->field(), target_->dim(n + shift_), source_->dim(n));
}

ChainMap ChainMap::identity(ComplexPtr c) {
    ChainMap m(c, c, 0);
    for (int n = c->min_degree(); n <= c->max_degree(); ++n)
        m.set_component(n, SparseMatrix::identity(c->field(), c->dim(n)));
    return m;
}

ChainMap ChainMap::zero(ComplexPtr source, ComplexPtr target, int shift) {
    return ChainMap(std::move(source), std::move(target), shift);
}

const SparseMatrix& ChainMap::component(int n) const {
    if (n < source_->min_degree() || n > source_->max_degree())
        throw std::out_of_range("chain map component outside the source range");
    return comps_[static_cast<std::size_t>(n - source_->min_degree())];
}

void ChainMap::set_component(int n, SparseMatrix m) {
    if (n < source_->min_degree() || n > source_->max_degree())
        throw std::out_of_range("chain map component outside the source range");
    if (m.rows() != target_->dim(n + shift_) || m.cols() != source_->dim(n))
        throw std::invalid_argument("chain map component in degree " + std::to_string(n) + " has the wrong shape");
    comps_[static_cast<std::size_t>(n - source_->min_degree())] = std::move(m);
}

Chain ChainMap::apply(const Chain& c) const {
    if (c.degree < source_->min_degree() || c.degree > source_->max_degree())
        return target_->zero(c.degree + shift_);
    return Chain{c.degree + shift_, component(c.degree).apply(c.coeffs)};
}

Chain ChainMap::apply(BasisRef b) const {
    const auto& m = component(b.degree);
    return Chain{b.degree + shift_, m.column_vec(b.index)};
}

ChainMap ChainMap::operator-() const {
    ChainMap out(*this);
    const Scalar minus = Scalar(field(), -1);
    for (auto& m : out.comps_) m = m.scaled(minus);
    return out;
}

ChainMap& ChainMap::operator+=(const ChainMap& o) {
    if (shift_ != o.shift_ || comps_.size() != o.comps_.size()) throw std::invalid_argument("chain map sum: shape mismatch");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
    return *this;
}

ChainMap& ChainMap::operator-=(const ChainMap& o) {
    if (shift_ != o.shift_ || comps_.size() != o.comps_.size())
        throw std::invalid_argument("chain map difference: shape mismatch");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
    return *this;
}

bool ChainMap::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const SparseMatrix& m) { return m.is_zero(); });
}

bool ChainMap::same_components(const ChainMap& o) const { return shift_ == o.shift_ && comps_ == o.comps_; }

ChainMap compose(const ChainMap& a, const ChainMap& b) {
    const auto& mid_b = *b.target();
    const auto& mid_a = *a.source();
    if (mid_a.min_degree() != mid_b.min_degree() || mid_a.max_degree() != mid_b.max_degree())
        throw std::invalid_argument("compose: target of b does not match source of a");
    for (int n = mid_a.min_degree(); n <= mid_a.max_degree(); ++n)
        if (mid_a.dim(n) != mid_b.dim(n)) throw std::invalid_argument("compose: target of b does not match source of a");
    ChainMap out(b.source(), a.target(), a.shift() + b.shift());
    const auto& src = *b.source();
    for (int n = src.min_degree(); n <= src.max_degree(); ++n) {
        const int mid = n + b.shift();
        if (mid < mid_a.min_degree() || mid > mid_a.max_degree()) continue;
        out.set_component(n, a.component(mid) * b.component(n));
    }
    return out;
}

ChainMap differential_map(const ComplexPtr& c) {
    ChainMap d(c, c, -1);
    for (int n = c->min_degree(); n <= c->max_degree(); ++n) d.set_component(n, c->differential(n));
    return d;
}

CheckResult verify_chain_map(const ChainMap& m) {
    const auto& s = *m.source();
    const Scalar sign = Scalar::sign(m.field(), m.shift() % 2 != 0);
    for (int n = s.min_degree(); n <= s.max_degree(); ++n) {
        const SparseMatrix lhs = m.target()->differential(n + m.shift()) * m.component(n);
        SparseMatrix rhs(m.field(), lhs.rows(), lhs.cols());
        if (n - 1 >= s.min_degree()) rhs = (m.component(n - 1) * s.differential(n)).scaled(sign);
        const SparseMatrix diff = lhs - rhs;
        for (std::size_t col = 0; col < diff.cols(); ++col)
            if (!diff.column(col).empty())
                return CheckResult::fail("map does not commute with d at degree " + std::to_string(n) +
                                         " on basis element '" + s.basis().label({n, col}) + "'");
    }
    return CheckResult::pass();
}

Scalar koszul_sign(Field f, const std::vector<int>& degrees, const std::vector<std::size_t>& perm) {
    if (perm.size() != degrees.size()) throw std::invalid_argument("koszul_sign: permutation size mismatch");
    std::vector<char> seen(perm.size(), 0);
    for (auto p : perm) {
        if (p >= perm.size() || seen[p]) throw std::invalid_argument("koszul_sign: not a permutation");
        seen[p] = 1;
    }
    bool negative = false;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b] && (degrees[perm[a]] % 2 != 0) && (degrees[perm[b]] % 2 != 0)) negative = !negative;
    return Scalar::sign(f, negative);
}

// -------------------------------------------------------------- tensor powers

namespace {

void enumerate_tuples(const ChainComplex& c, std::size_t k, Tuple& prefix, const std::function<void(const Tuple&)>& emit) {
    if (prefix.size() == k) {
        emit(prefix);
        return;
    }
    for (const auto& b : c.basis().all_refs()) {
        prefix.push_back(b);
        enumerate_tuples(c, k, prefix, emit);
        prefix.pop_back();
    }
}

int tuple_degree(const Tuple& t) {
    int d = 0;
    for (const auto& b : t) d += b.degree;
    return d;
}

}  // namespace

TensorPower tensor_power(const ComplexPtr& c, std::size_t k) {
    if (k == 0) throw std::invalid_argument("tensor_power: k must be positive");
    TensorPower tp;
    tp.factor = c;
    std::vector<Tuple> tuples;
    Tuple prefix;
    enumerate_tuples(*c, k, prefix, [&](const Tuple& t) { tuples.push_back(t); });
    std::stable_sort(tuples.begin(), tuples.end(),
                     [](const Tuple& a, const Tuple& b) { return tuple_degree(a) < tuple_degree(b); });
    GradedBasis basis;
    if (!tuples.empty()) basis = GradedBasis(tuple_degree(tuples.front()), tuple_degree(tuples.back()));
    for (const auto& t : tuples) {
        std::string label;
        for (std::size_t j = 0; j < t.size(); ++j) label += (j ? "|" : "") + c->basis().label(t[j]);
        const BasisRef r = basis.add(tuple_degree(t), label);
        tp.index[t] = r;
        tp.factors[r] = t;
    }
    const Field f = c->field();
    std::map<int, SparseMatrix> d;
    for (int n = basis.min_degree(); n <= basis.max_degree(); ++n) d.emplace(n, SparseMatrix(f, basis.dim(n - 1), basis.dim(n)));
    for (const auto& [t, r] : tp.index) {
        int before = 0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            const Chain dx = c->boundary(c->basis_chain(t[j]));
            const Scalar sign = Scalar::sign(f, before % 2 != 0);
            for (std::size_t i = 0; i < dx.coeffs.size(); ++i) {
                if (dx.coeffs[i].is_zero()) continue;
                Tuple u = t;
                u[j] = BasisRef{dx.degree, i};
                d.at(r.degree).add_to(tp.index.at(u).index, r.index, sign * dx.coeffs[i]);
            }
            before += t[j].degree;
        }
    }
    tp.complex = std::make_shared<ChainComplex>(f, std::move(basis), std::move(d));
    return tp;
}

ChainMap tensor_map(const std::vector<ChainMap>& maps, const TensorPower& source, const TensorPower& target) {
    const std::size_t k = maps.size();
    if (k == 0) throw std::invalid_argument("tensor_map: empty factor list");
    int shift = 0;
    for (const auto& m : maps) {
        if (m.source().get() != source.factor.get() || m.target().get() != target.factor.get())
            throw std::invalid_argument("tensor_map: factor map does not act on the tensored complex");
        shift += m.shift();
    }
    if (!source.factors.empty() && source.factors.begin()->second.size() != k)
        throw std::invalid_argument("tensor_map: arity mismatch with the source tensor power");
    const Field f = source.complex->field();
    ChainMap out(source.complex, target.complex, shift);
    std::map<int, SparseMatrix> comps;
    for (int n = source.complex->min_degree(); n <= source.complex->max_degree(); ++n)
        comps.emplace(n, SparseMatrix(f, target.complex->dim(n + shift), source.complex->dim(n)));
    for (const auto& [r, t] : source.factors) {
        // expand the product of images
        std::vector<std::pair<Tuple, Scalar>> acc{{Tuple{}, Scalar::one(f)}};
        int before = 0;
        bool negative = false;
        for (std::size_t j = 0; j < k; ++j) {
            if ((maps[j].shift() % 2 != 0) && (before % 2 != 0)) negative = !negative;
            before += t[j].degree;
            const Chain img = maps[j].apply(t[j]);
            std::vector<std::pair<Tuple, Scalar>> next;
            for (const auto& [prefix, coeff] : acc)
                for (std::size_t i = 0; i < img.coeffs.size(); ++i) {
                    if (img.coeffs[i].is_zero()) continue;
                    Tuple u = prefix;
                    u.push_back(BasisRef{img.degree, i});
                    next.emplace_back(std::move(u), coeff * img.coeffs[i]);
                }
            acc = std::move(next);
        }
        const Scalar sign = Scalar::sign(f, negative);
        for (const auto& [u, coeff] : acc) {
            auto it = target.index.find(u);
            if (it == target.index.end()) continue;
            comps.at(r.degree).add_to(it->second.index, r.index, sign * coeff);
        }
    }
    for (auto& [n, m] : comps) out.set_component(n, std::move(m));
    return out;
}

}  // namespace ainf
