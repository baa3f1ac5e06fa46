#include "ainf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>

#include "ainf/errors.hpp"

namespace ainf::io {

namespace {

// ------------------------------------------------------------------ lexing

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && is_space(s[a])) ++a;
    while (b > a && is_space(s[b - 1])) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        const std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

bool valid_label(std::string_view s) {
    if (s.empty() || s.front() == '+' || s.front() == '-') return false;
    return s.find_first_of(" \t\r*(),=:#") == std::string_view::npos;
}

struct Record {
    std::size_t line = 0;
    std::string lhs;                  // text before '=' (or the whole line)
    std::vector<std::string> head;    // words of lhs
    std::optional<std::string> rhs;
};

class Reader {
public:
    Reader(const std::string& text, std::string source) : source_(std::move(source)) {
        std::istringstream in(text);
        std::string raw;
        std::size_t n = 0;
        while (std::getline(in, raw)) {
            ++n;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            Record r;
            r.line = n;
            if (auto eq = line.find('='); eq != std::string::npos) {
                r.lhs = trim(std::string_view(line).substr(0, eq));
                r.rhs = trim(std::string_view(line).substr(eq + 1));
            } else {
                r.lhs = line;
            }
            r.head = words(r.lhs);
            records_.push_back(std::move(r));
        }
    }

    const std::vector<Record>& records() const { return records_; }

    [[noreturn]] void fail(std::size_t line, const std::string& what) const { throw ParseError(source_, line, what); }
    [[noreturn]] void fail(const Record& r, const std::string& what) const { fail(r.line, what); }

    std::size_t parse_count(const Record& r, const std::string& s) const {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail(r, "expected a count, got '" + s + "'");
        return v;
    }

    int parse_int(const Record& r, const std::string& s) const {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail(r, "expected an integer, got '" + s + "'");
        return v;
    }

    double parse_double(std::size_t line, const std::string& s) const {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v))
            fail(line, "expected a number, got '" + s + "'");
        return v;
    }

private:
    std::string source_;
    std::vector<Record> records_;
};

struct Term {
    Scalar coef;
    bool tuple = false;
    std::vector<std::string> atoms;
};

std::vector<std::string> split_tuple(const Reader& rd, const Record& r, std::string_view inner) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = inner.find(',', start);
        const std::string part = trim(inner.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!valid_label(part)) rd.fail(r, "bad label '" + part + "' in tensor");
        out.push_back(part);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Term parse_term(const Reader& rd, const Record& r, Field f, std::string_view tok, bool negative) {
    std::size_t star = std::string_view::npos;
    int depth = 0;
    for (std::size_t i = 0; i < tok.size(); ++i) {
        if (tok[i] == '(') ++depth;
        if (tok[i] == ')') --depth;
        if (tok[i] == '*' && depth == 0) {
            star = i;
            break;
        }
    }
    Term t{Scalar::one(f), false, {}};
    std::string_view atom = tok;
    if (star != std::string_view::npos) {
        try {
            t.coef = Scalar::parse(f, tok.substr(0, star));
        } catch (const std::exception& e) {
            rd.fail(r, e.what());
        }
        atom = tok.substr(star + 1);
    }
    if (negative) t.coef = -t.coef;
    if (!atom.empty() && atom.front() == '(') {
        if (atom.back() != ')') rd.fail(r, "unterminated tensor '" + std::string(atom) + "'");
        t.tuple = true;
        t.atoms = split_tuple(rd, r, atom.substr(1, atom.size() - 2));
    } else {
        if (!valid_label(atom)) rd.fail(r, "bad label '" + std::string(atom) + "'");
        t.atoms.emplace_back(atom);
    }
    return t;
}

std::vector<Term> parse_combination(const Reader& rd, const Record& r, Field f) {
    const std::string& s = *r.rhs;
    std::vector<Term> out;
    bool expect_term = true, op_seen = false, negative = false;
    std::size_t i = 0;
    while (true) {
        while (i < s.size() && is_space(s[i])) ++i;
        if (i == s.size()) break;
        const std::size_t start = i;
        int depth = 0;
        while (i < s.size() && (depth > 0 || !is_space(s[i]))) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')' && --depth < 0) rd.fail(r, "unbalanced parentheses");
            ++i;
        }
        if (depth != 0) rd.fail(r, "unbalanced parentheses");
        std::string_view tok(s.data() + start, i - start);
        if (tok == "+" || tok == "-") {
            if (op_seen) rd.fail(r, "two operators in a row");
            op_seen = true;
            expect_term = true;
            negative = negative != (tok == "-");
            continue;
        }
        if (tok.front() == '+' || tok.front() == '-') {
            if (op_seen && !expect_term) rd.fail(r, "two operators in a row");
            negative = negative != (tok.front() == '-');
            tok.remove_prefix(1);
            expect_term = true;
        }
        if (!expect_term) rd.fail(r, "missing operator before '" + std::string(tok) + "'");
        out.push_back(parse_term(rd, r, f, tok, negative));
        expect_term = false;
        op_seen = false;
        negative = false;
    }
    if (op_seen) rd.fail(r, "dangling operator");
    return out;
}

// ------------------------------------------------------------------ writing

std::string coefficient_prefix(const Scalar& c, bool first) {
    const bool neg = c.to_string().front() == '-';
    const Scalar a = neg ? -c : c;
    std::string out = first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (!a.is_one()) out += a.to_string() + "*";
    return out;
}

std::string combination(const std::vector<std::pair<std::string, Scalar>>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) out += coefficient_prefix(terms[i].second, i == 0) + terms[i].first;
    return out;
}

std::string chain_text(const ChainComplex& c, int degree, const SparseChain& entries) {
    std::vector<std::pair<std::string, Scalar>> terms;
    for (const auto& [row, k] : entries) terms.emplace_back(c.basis().label({degree, row}), k);
    return combination(terms);
}

std::string tuple_text(const ChainComplex& c, const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + c.basis().label(t[i]);
    return out + ")";
}

std::string tensor_text(const ChainComplex& c, const TensorTerms& terms) {
    std::vector<std::pair<std::string, Scalar>> out;
    for (const auto& [t, k] : terms) out.emplace_back(tuple_text(c, t), k);
    return combination(out);
}

// ------------------------------------------------------------------ complexes

// Collects `[prefix] degree` and `[prefix] d` records and builds the complex.
class ComplexBuilder {
public:
    ComplexBuilder(const Reader& rd, Field f, std::string prefix) : rd_(rd), f_(f), prefix_(std::move(prefix)) {}

    // Head words after stripping the prefix, or nullopt when the record is not ours.
    std::optional<std::vector<std::string>> own(const Record& r) const {
        if (prefix_.empty()) return r.head;
        if (r.head.empty() || r.head[0] != prefix_) return std::nullopt;
        return std::vector<std::string>(r.head.begin() + 1, r.head.end());
    }

    bool take(const Record& r) {
        const auto head = own(r);
        if (!head || head->empty()) return false;
        if ((*head)[0] == "degree") {
            if (r.rhs) rd_.fail(r, "unexpected '=' in a degree line");
            const auto colon = r.lhs.find(':');
            if (colon == std::string::npos) rd_.fail(r, "expected 'degree n: labels'");
            const std::string before = r.lhs.substr(0, colon);
            const auto bw = words(before);
            const int n = rd_.parse_int(r, bw.back());
            if (declared_.count(n)) rd_.fail(r, "degree " + std::to_string(n) + " declared twice");
            auto& labels = declared_[n];
            for (const auto& l : words(std::string_view(r.lhs).substr(colon + 1))) {
                if (!valid_label(l)) rd_.fail(r, "bad label '" + l + "'");
                if (!seen_.insert(l).second) rd_.fail(r, "label '" + l + "' declared twice");
                labels.push_back(l);
            }
            return true;
        }
        if ((*head)[0] == "d") {
            if (head->size() != 2 || !r.rhs) rd_.fail(r, "expected 'd label = ...'");
            diffs_.push_back(&r);
            return true;
        }
        return false;
    }

    bool declared() const { return !declared_.empty(); }

    ComplexPtr build() {
        if (declared_.empty()) rd_.fail(0, "no " + (prefix_.empty() ? std::string() : prefix_ + " ") + "basis declared");
        GradedBasis basis(declared_.begin()->first, declared_.rbegin()->first);
        for (const auto& [n, labels] : declared_)
            for (const auto& l : labels) basis.add(n, l);
        std::map<int, SparseMatrix> d;
        for (int n = basis.min_degree(); n <= basis.max_degree(); ++n) d.emplace(n, SparseMatrix(f_, basis.dim(n - 1), basis.dim(n)));
        std::set<std::string> done;
        auto shell = std::make_shared<ChainComplex>(f_, basis);
        for (const Record* r : diffs_) {
            const std::string& x = own(*r)->at(1);
            const BasisRef b = ref(*shell, *r, x);
            if (!done.insert(x).second) rd_.fail(*r, "differential of '" + x + "' given twice");
            const Vec v = chain(*shell, *r, b.degree - 1);
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!v[i].is_zero()) d.at(b.degree).set(i, b.index, v[i]);
        }
        return std::make_shared<ChainComplex>(f_, std::move(basis), std::move(d));
    }

    BasisRef ref(const ChainComplex& c, const Record& r, const std::string& label) const {
        if (!valid_label(label)) rd_.fail(r, "bad label '" + label + "'");
        const auto b = c.basis().find(label);
        if (!b) rd_.fail(r, "unknown label '" + label + "'");
        return *b;
    }

    // The right-hand side of r as a chain of the given degree.
    Vec chain(const ChainComplex& c, const Record& r, int degree) const {
        Vec v = zero_vec(f_, c.dim(degree));
        for (const auto& t : parse_combination(rd_, r, f_)) {
            if (t.tuple) rd_.fail(r, "expected a chain, got a tensor");
            const BasisRef b = ref(c, r, t.atoms[0]);
            if (b.degree != degree)
                rd_.fail(r, "'" + t.atoms[0] + "' has degree " + std::to_string(b.degree) + ", expected " + std::to_string(degree));
            v[b.index] += t.coef;
        }
        return v;
    }

    TensorTerms tensors(const ChainComplex& c, const Record& r, std::size_t arity) const {
        TensorTerms out;
        for (const auto& t : parse_combination(rd_, r, f_)) {
            if (!t.tuple || t.atoms.size() != arity)
                rd_.fail(r, "expected tensors of length " + std::to_string(arity));
            Tuple tup;
            for (const auto& a : t.atoms) tup.push_back(ref(c, r, a));
            add_term(out, tup, t.coef);
        }
        return out;
    }

private:
    const Reader& rd_;
    Field f_;
    std::string prefix_;
    std::map<int, std::vector<std::string>> declared_;
    std::set<std::string> seen_;
    std::vector<const Record*> diffs_;
};

void write_complex_into(std::string& out, const ChainComplex& c, const std::string& prefix) {
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
        out += prefix + "degree " + std::to_string(n) + ":";
        for (const auto& l : c.basis().labels(n)) out += " " + l;
        out += "\n";
    }
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
        const SparseMatrix d = c.differential(n);
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (!d.column(j).empty())
                out += prefix + "d " + c.basis().label({n, j}) + " = " + chain_text(c, n - 1, d.column(j)) + "\n";
    }
}

void write_map_into(std::string& out, const ChainMap& m, const std::string& name) {
    const ChainComplex& s = *m.source();
    for (int n = s.min_degree(); n <= s.max_degree(); ++n) {
        const SparseMatrix& c = m.component(n);
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (!c.column(j).empty())
                out += name + " " + s.basis().label({n, j}) + " = " + chain_text(*m.target(), n + m.shift(), c.column(j)) + "\n";
    }
}

ChainMap read_map(const Reader& rd, const ComplexBuilder& b, const std::vector<const Record*>& lines, ComplexPtr source,
                  ComplexPtr target, int shift) {
    ChainMap m(source, target, shift);
    std::map<int, SparseMatrix> comps;
    for (int n = source->min_degree(); n <= source->max_degree(); ++n) comps.emplace(n, m.component(n));
    std::set<std::string> done;
    for (const Record* r : lines) {
        const std::string& x = r->head.at(1);
        const BasisRef s = b.ref(*source, *r, x);
        if (!done.insert(x).second) rd.fail(*r, r->head[0] + " of '" + x + "' given twice");
        const Vec v = b.chain(*target, *r, s.degree + shift);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) comps.at(s.degree).set(i, s.index, v[i]);
    }
    for (auto& [n, c] : comps) m.set_component(n, std::move(c));
    return m;
}

[[noreturn]] void unknown(const Reader& rd, const Record& r) {
    rd.fail(r, "unrecognised line '" + r.lhs + (r.rhs ? " = " + *r.rhs : std::string()) + "'");
}

}  // namespace

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ComplexPtr parse_complex(const std::string& text, Field f, const std::string& source) {
    Reader rd(text, source);
    ComplexBuilder b(rd, f, "");
    for (const auto& r : rd.records())
        if (!b.take(r)) unknown(rd, r);
    return b.build();
}

std::string write_complex(const ChainComplex& c) {
    std::string out;
    write_complex_into(out, c, "");
    return out;
}

DGAlgebra parse_dga(const std::string& text, Field f, const std::string& source) {
    Reader rd(text, source);
    ComplexBuilder b(rd, f, "");
    std::vector<const Record*> products;
    for (const auto& r : rd.records()) {
        if (b.take(r)) continue;
        if (r.head.size() == 3 && r.head[0] == "m" && r.rhs)
            products.push_back(&r);
        else
            unknown(rd, r);
    }
    DGAlgebra a(b.build());
    const ChainComplex& c = *a.complex();
    std::set<std::pair<BasisRef, BasisRef>> done;
    for (const Record* r : products) {
        const BasisRef x = b.ref(c, *r, r->head[1]), y = b.ref(c, *r, r->head[2]);
        if (!done.insert({x, y}).second) rd.fail(*r, "product given twice");
        a.set_product(x, y, b.chain(c, *r, x.degree + y.degree));
    }
    return a;
}

std::string write_dga(const DGAlgebra& a) {
    const ChainComplex& c = *a.complex();
    std::string out = write_complex(c);
    for (const auto& [xy, v] : a.products())
        out += "m " + c.basis().label(xy.first) + " " + c.basis().label(xy.second) + " = " +
               chain_text(c, xy.first.degree + xy.second.degree, v) + "\n";
    return out;
}

DGCoalgebra parse_coalgebra(const std::string& text, Field f, const std::string& source) {
    Reader rd(text, source);
    ComplexBuilder b(rd, f, "");
    std::vector<const Record*> coproducts;
    for (const auto& r : rd.records()) {
        if (b.take(r)) continue;
        if (r.head.size() == 2 && r.head[0] == "delta" && r.rhs)
            coproducts.push_back(&r);
        else
            unknown(rd, r);
    }
    DGCoalgebra co(b.build());
    const ChainComplex& c = *co.complex();
    std::set<BasisRef> done;
    for (const Record* r : coproducts) {
        const BasisRef x = b.ref(c, *r, r->head[1]);
        if (!done.insert(x).second) rd.fail(*r, "coproduct given twice");
        try {
            co.set_coproduct(x, b.tensors(c, *r, 2));
        } catch (const std::invalid_argument& e) {
            rd.fail(*r, e.what());
        }
    }
    return co;
}

std::string write_coalgebra(const DGCoalgebra& co) {
    const ChainComplex& c = *co.complex();
    std::string out = write_complex(c);
    for (const auto& [x, terms] : co.coproducts())
        if (!terms.empty()) out += "delta " + c.basis().label(x) + " = " + tensor_text(c, terms) + "\n";
    return out;
}

Contraction parse_contraction(const std::string& text, Field f, const std::string& source, const ComplexPtr& big) {
    Reader rd(text, source);
    ComplexBuilder bb(rd, f, ""), sb(rd, f, "small");
    std::map<std::string, std::vector<const Record*>> maps;
    for (const auto& r : rd.records()) {
        if (sb.take(r) || bb.take(r)) continue;
        if (r.head.size() == 2 && r.rhs && (r.head[0] == "f" || r.head[0] == "g" || r.head[0] == "phi"))
            maps[r.head[0]].push_back(&r);
        else
            unknown(rd, r);
    }
    ComplexPtr n = big;
    if (bb.declared()) {
        ComplexPtr declared = bb.build();
        if (big) {
            bool same = declared->basis() == big->basis() && declared->field() == big->field();
            for (int k = big->min_degree(); same && k <= big->max_degree(); ++k)
                same = declared->differential(k) == big->differential(k);
            if (!same) rd.fail(0, "the declared big complex differs from the given one");
        }
        n = declared;
    }
    if (!n) rd.fail(0, "no big complex declared");
    ComplexPtr m = sb.build();
    ChainMap fm = read_map(rd, bb, maps["f"], n, m, 0);
    ChainMap gm = read_map(rd, sb, maps["g"], m, n, 0);
    ChainMap pm = read_map(rd, bb, maps["phi"], n, n, 1);
    return Contraction{n, m, std::move(fm), std::move(gm), std::move(pm)};
}

std::string write_contraction(const Contraction& c) {
    std::string out;
    write_complex_into(out, *c.big, "");
    write_complex_into(out, *c.small, "small ");
    write_map_into(out, c.f, "f");
    write_map_into(out, c.g, "g");
    write_map_into(out, c.phi, "phi");
    return out;
}

Perturbation parse_perturbation(const std::string& text, const Contraction& c, const std::string& source) {
    Reader rd(text, source);
    ComplexBuilder b(rd, c.big->field(), "");
    std::vector<const Record*> lines;
    std::optional<std::size_t> bound;
    for (const auto& r : rd.records()) {
        if (r.head.size() == 2 && r.head[0] == "perturb" && r.rhs) {
            lines.push_back(&r);
        } else if (r.head.size() == 2 && r.head[0] == "nil_bound" && !r.rhs) {
            if (bound) rd.fail(r, "nil_bound given twice");
            bound = rd.parse_count(r, r.head[1]);
        } else {
            unknown(rd, r);
        }
    }
    return Perturbation{read_map(rd, b, lines, c.big, c.big, -1), bound};
}

std::string write_perturbation(const Perturbation& p) {
    std::string out;
    if (p.nil_bound) out += "nil_bound " + std::to_string(*p.nil_bound) + "\n";
    write_map_into(out, p.delta, "perturb");
    return out;
}

AInfinityStructure parse_structure(const std::string& text, Field f, const std::string& source) {
    Reader rd(text, source);
    ComplexBuilder b(rd, f, "");
    std::optional<StructureKind> kind;
    std::optional<std::size_t> arity, certified, gap;
    std::optional<int> window;
    bool status = false;
    std::vector<const Record*> ops;
    for (const auto& r : rd.records()) {
        if (b.take(r)) continue;
        const std::string key = r.head.empty() ? "" : r.head[0];
        if ((key == "m" || key == "Delta") && r.rhs && r.head.size() >= 3) {
            ops.push_back(&r);
        } else if (key == "kind" && r.head.size() == 2 && !r.rhs) {
            if (r.head[1] == "algebra")
                kind = StructureKind::algebra;
            else if (r.head[1] == "coalgebra")
                kind = StructureKind::coalgebra;
            else
                rd.fail(r, "kind must be 'algebra' or 'coalgebra'");
        } else if (key == "arity" && r.head.size() == 2 && !r.rhs) {
            arity = rd.parse_count(r, r.head[1]);
        } else if (key == "certified" && r.head.size() == 2 && !r.rhs) {
            certified = rd.parse_count(r, r.head[1]);
        } else if (key == "window" && r.head.size() == 2 && !r.rhs) {
            window = rd.parse_int(r, r.head[1]);
        } else if (key == "status") {
            const std::string full = r.lhs + (r.rhs ? "=" + *r.rhs : std::string());
            const std::string pre = "status complete (gap q=";
            status = true;
            if (full == "status incomplete") continue;
            if (full.rfind(pre, 0) != 0 || full.back() != ')') rd.fail(r, "bad status line");
            gap = rd.parse_count(r, full.substr(pre.size(), full.size() - pre.size() - 1));
        } else {
            unknown(rd, r);
        }
    }
    if (!kind) rd.fail(0, "missing 'kind' line");
    if (!arity) rd.fail(0, "missing 'arity' line");
    if (!certified) rd.fail(0, "missing 'certified' line");
    if (!status) rd.fail(0, "missing 'status' line");
    ComplexPtr c = b.build();
    AInfinityStructure s{c, *kind, {}, {}, *certified, TupleWindow{window}, gap};
    for (std::size_t n = 1; n <= *arity; ++n) {
        if (*kind == StructureKind::algebra)
            s.ops.emplace(n, MultilinearMap(c, c, n, static_cast<int>(n) - 2));
        else
            s.coops.emplace(n, CoOperation(c, n, static_cast<int>(n) - 2));
    }
    std::set<std::pair<std::size_t, Tuple>> done;
    for (const Record* r : ops) {
        const bool alg = r->head[0] == "m";
        if (alg != (*kind == StructureKind::algebra)) rd.fail(*r, "operation does not match the structure kind");
        const std::size_t n = rd.parse_count(*r, r->head[1]);
        if (n < 1 || n > *arity) rd.fail(*r, "arity " + std::to_string(n) + " outside 1.." + std::to_string(*arity));
        if (alg) {
            if (r->head.size() != n + 2) rd.fail(*r, "expected " + std::to_string(n) + " inputs");
            Tuple t;
            for (std::size_t i = 2; i < r->head.size(); ++i) t.push_back(b.ref(*c, *r, r->head[i]));
            if (!done.insert({n, t}).second) rd.fail(*r, "value given twice");
            auto& op = s.ops.at(n);
            op.set(t, b.chain(*c, *r, op.output_degree(t)));
        } else {
            if (r->head.size() != 3) rd.fail(*r, "expected 'Delta n label = ...'");
            const BasisRef x = b.ref(*c, *r, r->head[2]);
            if (!done.insert({n, Tuple{x}}).second) rd.fail(*r, "value given twice");
            try {
                s.coops.at(n).set(x, b.tensors(*c, *r, n));
            } catch (const std::invalid_argument& e) {
                rd.fail(*r, e.what());
            }
        }
    }
    return s;
}

std::string write_structure(const AInfinityStructure& s) {
    const ChainComplex& c = *s.carrier;
    std::string out = write_complex(c);
    const bool alg = s.kind == StructureKind::algebra;
    const std::size_t arity = alg ? (s.ops.empty() ? 0 : s.ops.rbegin()->first) : (s.coops.empty() ? 0 : s.coops.rbegin()->first);
    out += std::string("kind ") + (alg ? "algebra" : "coalgebra") + "\n";
    out += "arity " + std::to_string(arity) + "\n";
    out += "certified " + std::to_string(s.certified_arity) + "\n";
    if (s.window.min_total) out += "window " + std::to_string(*s.window.min_total) + "\n";
    if (alg) {
        for (const auto& [n, op] : s.ops)
            for (const auto& [t, v] : op.values()) {
                if (v.empty()) continue;
                out += "m " + std::to_string(n);
                for (const auto& x : t) out += " " + c.basis().label(x);
                out += " = " + chain_text(c, op.output_degree(t), v) + "\n";
            }
    } else {
        for (const auto& [n, op] : s.coops)
            for (const auto& [x, terms] : op.values())
                if (!terms.empty())
                    out += "Delta " + std::to_string(n) + " " + c.basis().label(x) + " = " + tensor_text(c, terms) + "\n";
    }
    out += s.gap_q ? "status complete (gap q=" + std::to_string(*s.gap_q) + ")\n" : "status incomplete\n";
    return out;
}

std::vector<Point> parse_points(const std::string& text, const std::string& source) {
    Reader rd(text, source);
    std::vector<Point> out;
    for (const auto& r : rd.records()) {
        if (r.rhs) unknown(rd, r);
        Point p;
        for (const auto& w : r.head) {
            p.push_back(rd.parse_double(r.line, w));
            if (!std::isfinite(p.back())) rd.fail(r, "coordinate is not finite");
        }
        if (!out.empty() && p.size() != out.front().size()) rd.fail(r, "points of different dimensions");
        out.push_back(std::move(p));
    }
    return out;
}

std::string write_points(const std::vector<Point>& points) {
    std::string out;
    for (const auto& p : points) {
        for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + format_value(p[i]);
        out += "\n";
    }
    return out;
}

FilteredComplex parse_filtration(const std::string& text, const std::string& source) {
    Reader rd(text, source);
    FilteredComplex f;
    for (const auto& r : rd.records()) {
        if (r.rhs || r.head.size() < 2) rd.fail(r, "expected 'value v0 v1 ...'");
        const double value = rd.parse_double(r.line, r.head[0]);
        std::vector<std::size_t> v;
        for (std::size_t i = 1; i < r.head.size(); ++i) v.push_back(rd.parse_count(r, r.head[i]));
        try {
            f.add(std::move(v), value);
        } catch (const std::invalid_argument& e) {
            rd.fail(r, e.what());
        }
    }
    return f;
}

std::string write_filtration(const FilteredComplex& f) {
    std::string out;
    for (const auto& s : f.simplices()) {
        out += format_value(s.value);
        for (auto v : s.vertices) out += " " + std::to_string(v);
        out += "\n";
    }
    return out;
}

PersistenceDiagram parse_diagram(const std::string& text, const std::string& source) {
    PersistenceDiagram d;
    Reader rd("", source);
    Record probe;
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++n;
        probe.line = n;
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto w = words(std::string_view(line).substr(1));
            if (w.empty()) continue;
            if (w[0] == "barcode" && w.size() == 1) {
                if (header) rd.fail(n, "second diagram header");
                header = true;
            } else if (w[0] == "delta" && w.size() == 2) {
                if (header) rd.fail(n, "second diagram header");
                header = true;
                d.kind = DiagramKind::delta;
                d.arity = rd.parse_count(probe, w[1]);
            } else if (w[0] == "zero_length" && w.size() == 2) {
                d.zero_length = rd.parse_count(probe, w[1]);
            } else if (w[0] == "rank" && w.size() == 5) {
                d.ranks.push_back(RankEntry{rd.parse_int(probe, w[1]), rd.parse_double(n, w[2]), rd.parse_double(n, w[3]),
                                            rd.parse_count(probe, w[4])});
            } else if (w[0] == "warning") {
                const auto at = line.find("warning");
                d.warnings.push_back(trim(std::string_view(line).substr(at + 7)));
            }
            continue;
        }
        if (auto hash = line.find('#'); hash != std::string::npos) line = trim(std::string_view(line).substr(0, hash));
        const auto w = words(line);
        if (w.size() != 3) rd.fail(n, "expected 'degree birth death'");
        Interval i{rd.parse_int(probe, w[0]), rd.parse_double(n, w[1]), rd.parse_double(n, w[2])};
        if (!std::isfinite(i.birth)) rd.fail(n, "birth must be finite");
        if (i.death < i.birth) rd.fail(n, "death precedes birth");
        d.intervals.push_back(i);
    }
    return d;
}

std::string write_diagram(const PersistenceDiagram& d) {
    std::string out = d.kind == DiagramKind::delta ? "# delta " + std::to_string(d.arity) + "\n" : "# barcode\n";
    out += "# zero_length " + std::to_string(d.zero_length) + "\n";
    for (const auto& w : d.warnings) out += "# warning " + w + "\n";
    for (const auto& i : d.intervals)
        out += std::to_string(i.degree) + " " + format_value(i.birth) + " " + format_value(i.death) + "\n";
    for (const auto& r : d.ranks)
        out += "# rank " + std::to_string(r.degree) + " " + format_value(r.from) + " " + format_value(r.to) + " " +
               std::to_string(r.rank) + "\n";
    return out;
}

}  // namespace ainf::io
