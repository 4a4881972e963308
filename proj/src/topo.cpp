#include "commcat/topo.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace commcat::topo {

namespace {

void merge_into(std::vector<Element>& dst, const std::vector<Element>& src) {
    std::vector<Element> out;
    out.reserve(dst.size() + src.size());
    std::set_union(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(out));
    dst.swap(out);
}

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    if (labels.size() != n) throw PosetError("label count does not match poset size");
    return labels;
}

}  // namespace

Poset Poset::from_relation(std::size_t n, const std::vector<std::pair<Element, Element>>& less,
                           std::vector<std::string> labels) {
    std::vector<std::vector<Element>> succ(n);
    std::vector<std::size_t> indeg(n, 0);
    for (auto [a, b] : less) {
        if (a >= n || b >= n) throw PosetError("relation refers to a missing element");
        if (a == b) throw PosetError("strict relation is not irreflexive at " + std::to_string(a));
        succ[a].push_back(b);
    }
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (Element b : s) ++indeg[b];
    }
    // Kahn's order; leftover elements lie on a cycle.
    std::vector<Element> order;
    order.reserve(n);
    for (Element v = 0; v < n; ++v)
        if (indeg[v] == 0) order.push_back(v);
    for (std::size_t head = 0; head < order.size(); ++head)
        for (Element w : succ[order[head]])
            if (--indeg[w] == 0) order.push_back(w);
    if (order.size() != n) {
        for (Element v = 0; v < n; ++v)
            if (indeg[v] != 0)
                throw PosetError("relation is not antisymmetric: element " + std::to_string(v) + " lies on a cycle");
    }

    Poset P;
    P.up_.assign(n, {});
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto& up = P.up_[*it];
        for (Element w : succ[*it]) {
            merge_into(up, P.up_[w]);
            merge_into(up, {w});
        }
    }
    P.down_.assign(n, {});
    for (Element a = 0; a < n; ++a)
        for (Element b : P.up_[a]) P.down_[b].push_back(a);
    P.labels_ = default_labels(n, std::move(labels));
    return P;
}

Poset Poset::from_predicate(std::size_t n, const std::function<bool(Element, Element)>& leq,
                            std::vector<std::string> labels) {
    std::vector<std::pair<Element, Element>> rel;
    for (Element a = 0; a < n; ++a) {
        if (!leq(a, a)) throw PosetError("relation is not reflexive at " + std::to_string(a));
        for (Element b = 0; b < n; ++b)
            if (a != b && leq(a, b)) {
                if (leq(b, a))
                    throw PosetError("relation is not antisymmetric: " + std::to_string(a) + " and " +
                                     std::to_string(b));
                rel.emplace_back(a, b);
            }
    }
    Poset P = from_relation(n, rel, std::move(labels));
    // The closure must add nothing.
    std::size_t closed = 0;
    for (const auto& u : P.up_) closed += u.size();
    if (closed != rel.size()) {
        for (auto [a, b] : P.relation())
            if (!leq(a, b))
                throw PosetError("relation is not transitive: " + std::to_string(a) + " < " + std::to_string(b) +
                                 " is implied but not given");
    }
    return P;
}

bool Poset::leq(Element a, Element b) const {
    return a == b || std::binary_search(up_[a].begin(), up_[a].end(), b);
}

std::vector<std::pair<Element, Element>> Poset::relation() const {
    std::vector<std::pair<Element, Element>> out;
    for (Element a = 0; a < up_.size(); ++a)
        for (Element b : up_[a]) out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<Element, Element>> Poset::covering() const {
    std::vector<std::pair<Element, Element>> out;
    for (Element a = 0; a < up_.size(); ++a)
        for (Element b : up_[a]) {
            // b covers a unless some c with a < c < b exists.
            bool covers = true;
            for (Element c : up_[a])
                if (c != b && std::binary_search(up_[c].begin(), up_[c].end(), b)) {
                    covers = false;
                    break;
                }
            if (covers) out.emplace_back(a, b);
        }
    return out;
}

std::vector<Element> Poset::minimal_elements() const {
    std::vector<Element> out;
    for (Element a = 0; a < down_.size(); ++a)
        if (down_[a].empty()) out.push_back(a);
    return out;
}

std::vector<Element> Poset::maximal_elements() const {
    std::vector<Element> out;
    for (Element a = 0; a < up_.size(); ++a)
        if (up_[a].empty()) out.push_back(a);
    return out;
}

GPoset::GPoset(Poset poset, std::vector<std::vector<Element>> action)
    : poset_(std::move(poset)), action_(std::move(action)) {
    for (const auto& s : action_)
        if (s.size() != poset_.size()) throw PosetError("generator action has the wrong length");
}

std::string GPoset::check_action() const {
    for (std::size_t s = 0; s < action_.size(); ++s) {
        std::vector<bool> hit(size(), false);
        for (Element x : action_[s]) {
            if (x >= size() || hit[x]) return "generator " + std::to_string(s) + " is not a bijection";
            hit[x] = true;
        }
        for (auto [a, b] : poset_.relation()) {
            if (!poset_.less(action_[s][a], action_[s][b]))
                return "generator " + std::to_string(s) + " breaks " + poset_.label(a) + " < " + poset_.label(b);
        }
    }
    return {};
}

OrbitPoset orbit_poset(const GPoset& X) {
    const std::size_t n = X.size();
    std::vector<Element> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Element x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& s : X.action())
        for (Element x = 0; x < n; ++x) {
            Element a = find(x), b = find(s[x]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }

    OrbitPoset out;
    out.orbit_of.assign(n, 0);
    std::vector<std::int64_t> id_of_root(n, -1);
    for (Element x = 0; x < n; ++x) {
        Element r = find(x);
        if (id_of_root[r] < 0) {
            id_of_root[r] = static_cast<std::int64_t>(out.orbits.size());
            out.orbits.emplace_back();
        }
        out.orbit_of[x] = static_cast<Element>(id_of_root[r]);
        out.orbits[out.orbit_of[x]].push_back(x);
    }

    std::vector<std::pair<Element, Element>> rel;
    for (auto [a, b] : X.poset().relation()) {
        Element oa = out.orbit_of[a], ob = out.orbit_of[b];
        if (oa == ob)
            throw PosetError("orbit order is not antisymmetric: " + X.poset().label(a) + " < " + X.poset().label(b) +
                             " within one orbit");
        rel.emplace_back(oa, ob);
    }
    std::vector<std::string> labels;
    for (const auto& o : out.orbits) labels.push_back("[" + X.poset().label(o.front()) + "]");
    out.poset = Poset::from_relation(out.orbits.size(), rel, std::move(labels));
    return out;
}

// ---------------------------------------------------------------------------

void SimplicialComplex::add(Simplex s) {
    const std::size_t d = s.size() - 1;
    if (faces_.size() <= d) {
        faces_.resize(d + 1);
        index_.resize(d + 1);
    }
    auto [it, inserted] = index_[d].try_emplace(s, faces_[d].size());
    if (inserted) faces_[d].push_back(std::move(s));
}

SimplicialComplex SimplicialComplex::from_faces(std::size_t vertex_count, const std::vector<Simplex>& faces,
                                                std::size_t max_simplices) {
    SimplicialComplex K;
    K.vertex_count_ = vertex_count;
    std::vector<Simplex> work;
    for (Simplex s : faces) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.empty()) continue;
        if (s.back() >= vertex_count) throw std::invalid_argument("face uses a vertex outside the complex");
        work.push_back(std::move(s));
    }
    // Insert every nonempty subset, skipping subsets already present.
    while (!work.empty()) {
        Simplex s = std::move(work.back());
        work.pop_back();
        const std::size_t d = s.size() - 1;
        if (d < K.index_.size() && K.index_[d].contains(s)) continue;
        if (K.face_count() >= max_simplices)
            throw SimplexBoundExceeded("simplicial complex exceeds " + std::to_string(max_simplices) + " simplices");
        if (s.size() > 1)
            for (std::size_t i = 0; i < s.size(); ++i) {
                Simplex t = s;
                t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
                work.push_back(std::move(t));
            }
        K.add(std::move(s));
    }
    for (auto& level : K.faces_) std::sort(level.begin(), level.end());
    for (std::size_t d = 0; d < K.faces_.size(); ++d)
        for (std::size_t i = 0; i < K.faces_[d].size(); ++i) K.index_[d][K.faces_[d][i]] = i;
    return K;
}

std::size_t SimplicialComplex::face_count() const {
    std::size_t total = 0;
    for (const auto& level : faces_) total += level.size();
    return total;
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
    if (s.empty() || s.size() > index_.size()) return std::nullopt;
    auto it = index_[s.size() - 1].find(s);
    if (it == index_[s.size() - 1].end()) return std::nullopt;
    return it->second;
}

long long SimplicialComplex::euler_characteristic() const {
    long long chi = 0;
    for (std::size_t d = 0; d < faces_.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(faces_[d].size());
    return chi;
}

namespace {

void extend_chains(const Poset& X, Simplex& chain, std::vector<Simplex>& out, std::size_t max_simplices) {
    if (out.size() >= max_simplices)
        throw SimplexBoundExceeded("order complex exceeds " + std::to_string(max_simplices) + " simplices");
    Simplex face = chain;
    std::sort(face.begin(), face.end());
    out.push_back(std::move(face));
    for (Element b : X.above(chain.back())) {
        chain.push_back(b);
        extend_chains(X, chain, out, max_simplices);
        chain.pop_back();
    }
}

}  // namespace

SimplicialComplex order_complex(const Poset& X, std::size_t max_simplices) {
    std::vector<Simplex> chains;
    Simplex chain;
    for (Element a = 0; a < X.size(); ++a) {
        chain.assign(1, a);
        extend_chains(X, chain, chains, max_simplices);
    }
    // Chains are already closed under taking faces.
    return SimplicialComplex::from_faces(X.size(), chains, max_simplices);
}

long long order_complex_euler(const Poset& X) {
    const std::size_t n = X.size();
    std::vector<Element> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Strict down-sets grow along the order.
    std::stable_sort(order.begin(), order.end(),
                     [&](Element a, Element b) { return X.below(a).size() < X.below(b).size(); });
    // signed[v] = Σ over chains with top v of (-1)^(length-1)
    std::vector<BigInt> signed_count(n);
    BigInt chi = 0;
    for (Element v : order) {
        BigInt s = 1;
        for (Element u : X.below(v)) s -= signed_count[u];
        signed_count[v] = s;
        chi += s;
    }
    return chi.convert_to<long long>();
}

SimplicialComplex clique_complex(const std::vector<std::vector<Element>>& adjacency, std::size_t max_simplices) {
    const std::size_t n = adjacency.size();
    std::vector<std::vector<Element>> higher(n);
    for (Element v = 0; v < n; ++v) {
        for (Element w : adjacency[v])
            if (w > v) higher[v].push_back(w);
        std::sort(higher[v].begin(), higher[v].end());
    }
    std::vector<Simplex> cliques;
    Simplex current;
    std::function<void(const std::vector<Element>&)> grow = [&](const std::vector<Element>& candidates) {
        if (cliques.size() >= max_simplices)
            throw SimplexBoundExceeded("clique complex exceeds " + std::to_string(max_simplices) + " simplices");
        cliques.push_back(current);
        for (Element v : candidates) {
            std::vector<Element> next;
            std::set_intersection(candidates.begin(), candidates.end(), higher[v].begin(), higher[v].end(),
                                  std::back_inserter(next));
            current.push_back(v);
            grow(next);
            current.pop_back();
        }
    };
    for (Element v = 0; v < n; ++v) {
        current.assign(1, v);
        grow(higher[v]);
    }
    return SimplicialComplex::from_faces(n, cliques, max_simplices);
}

Poset face_poset(const SimplicialComplex& K, std::vector<Simplex>* faces_out) {
    std::vector<Simplex> faces;
    std::vector<std::size_t> offset;
    for (int d = 0; d <= K.dimension(); ++d) {
        offset.push_back(faces.size());
        faces.insert(faces.end(), K.faces(d).begin(), K.faces(d).end());
    }
    std::vector<std::pair<Element, Element>> rel;
    for (Element i = 0; i < faces.size(); ++i) {
        const Simplex& s = faces[i];
        if (s.size() < 2) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            Simplex t = s;
            t.erase(t.begin() + static_cast<std::ptrdiff_t>(j));
            rel.emplace_back(static_cast<Element>(offset[t.size() - 1] + *K.index_of(t)), i);
        }
    }
    std::vector<std::string> labels;
    for (const auto& s : faces) {
        std::string l = "{";
        for (std::size_t j = 0; j < s.size(); ++j) l += (j ? "," : "") + std::to_string(s[j]);
        labels.push_back(l + "}");
    }
    if (faces_out) *faces_out = faces;
    return Poset::from_relation(faces.size(), rel, std::move(labels));
}

// ---------------------------------------------------------------------------

std::vector<SparseIntMatrix> boundary_matrices(const SimplicialComplex& K) {
    std::vector<SparseIntMatrix> out;
    for (int d = 1; d <= K.dimension(); ++d) {
        SparseIntMatrix m;
        m.rows = K.faces(d - 1).size();
        m.cols = K.faces(d).size();
        m.columns.resize(m.cols);
        for (std::size_t c = 0; c < m.cols; ++c) {
            const Simplex& s = K.faces(d)[c];
            for (std::size_t i = 0; i < s.size(); ++i) {
                Simplex t = s;
                t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
                m.columns[c].emplace_back(static_cast<std::uint32_t>(*K.index_of(t)), i % 2 == 0 ? 1 : -1);
            }
            std::sort(m.columns[c].begin(), m.columns[c].end());
        }
        out.push_back(std::move(m));
    }
    // ∂_{d} ∘ ∂_{d+1} = 0
    for (std::size_t d = 0; d + 1 < out.size(); ++d) {
        const auto& lo = out[d];
        const auto& hi = out[d + 1];
        for (std::size_t c = 0; c < hi.cols; ++c) {
            std::vector<std::int64_t> acc(lo.rows, 0);
            for (auto [mid, v] : hi.columns[c])
                for (auto [r, w] : lo.columns[mid]) acc[r] += v * w;
            for (auto x : acc)
                if (x != 0) throw std::logic_error("boundary of a boundary is nonzero in degree " + std::to_string(d + 2));
        }
    }
    return out;
}

DenseIntMatrix DenseIntMatrix::identity(std::size_t n) {
    DenseIntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

DenseIntMatrix DenseIntMatrix::from_sparse(const SparseIntMatrix& s) {
    DenseIntMatrix m(s.rows, s.cols);
    for (std::size_t c = 0; c < s.cols; ++c)
        for (auto [r, v] : s.columns[c]) m.at(r, c) = v;
    return m;
}

DenseIntMatrix DenseIntMatrix::operator*(const DenseIntMatrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("matrix dimension mismatch");
    DenseIntMatrix out(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            if (at(i, k) == 0) continue;
            for (std::size_t j = 0; j < o.cols; ++j) out.at(i, j) += at(i, k) * o.at(k, j);
        }
    return out;
}

namespace {

struct Overflow {};

// Arithmetic policy: plain BigInt or int64 that throws Overflow.
inline BigInt mul_sub(const BigInt& a, const BigInt& q, const BigInt& b) { return a - q * b; }
inline std::int64_t mul_sub(std::int64_t a, std::int64_t q, std::int64_t b) {
    std::int64_t prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
    return out;
}
inline BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
inline std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw Overflow{};
    return out;
}
inline BigInt abs_of(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }
inline std::int64_t abs_of(std::int64_t a) {
    if (a == std::numeric_limits<std::int64_t>::min()) throw Overflow{};
    return a < 0 ? -a : a;
}
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    if (a == std::numeric_limits<std::int64_t>::min() && b == -1) throw Overflow{};
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

template <class Int>
struct DenseWork {
    std::size_t rows, cols;
    std::vector<Int> a;
    Int& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
};

template <class Int>
struct Transforms {
    DenseWork<Int>* U = nullptr;  // rows x rows, left factor
    DenseWork<Int>* V = nullptr;  // cols x cols, right factor
};

template <class Int>
void row_op(DenseWork<Int>& M, std::size_t dst, std::size_t src, const Int& q, DenseWork<Int>* U) {
    // row dst -= q * row src
    for (std::size_t c = 0; c < M.cols; ++c)
        if (M.at(src, c) != 0) M.at(dst, c) = mul_sub(M.at(dst, c), q, M.at(src, c));
    if (U)
        for (std::size_t c = 0; c < U->cols; ++c)
            if (U->at(src, c) != 0) U->at(dst, c) = mul_sub(U->at(dst, c), q, U->at(src, c));
}

template <class Int>
void col_op(DenseWork<Int>& M, std::size_t dst, std::size_t src, const Int& q, DenseWork<Int>* V) {
    for (std::size_t r = 0; r < M.rows; ++r)
        if (M.at(r, src) != 0) M.at(r, dst) = mul_sub(M.at(r, dst), q, M.at(r, src));
    if (V)
        for (std::size_t r = 0; r < V->rows; ++r)
            if (V->at(r, src) != 0) V->at(r, dst) = mul_sub(V->at(r, dst), q, V->at(r, src));
}

template <class Int>
void swap_rows(DenseWork<Int>& M, std::size_t a, std::size_t b, DenseWork<Int>* U) {
    if (a == b) return;
    for (std::size_t c = 0; c < M.cols; ++c) std::swap(M.at(a, c), M.at(b, c));
    if (U)
        for (std::size_t c = 0; c < U->cols; ++c) std::swap(U->at(a, c), U->at(b, c));
}

template <class Int>
void swap_cols(DenseWork<Int>& M, std::size_t a, std::size_t b, DenseWork<Int>* V) {
    if (a == b) return;
    for (std::size_t r = 0; r < M.rows; ++r) std::swap(M.at(r, a), M.at(r, b));
    if (V)
        for (std::size_t r = 0; r < V->rows; ++r) std::swap(V->at(r, a), V->at(r, b));
}

// Smallest-entry pivoting SNF, in place. Returns the diagonal.
template <class Int>
std::vector<Int> dense_snf(DenseWork<Int>& M, Transforms<Int> T) {
    const std::size_t n = std::min(M.rows, M.cols);
    std::vector<Int> diag;
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // Locate the smallest nonzero entry in the trailing block.
            bool found = false;
            std::size_t pr = t, pc = t;
            Int best = 0;
            for (std::size_t r = t; r < M.rows; ++r)
                for (std::size_t c = t; c < M.cols; ++c) {
                    const Int& v = M.at(r, c);
                    if (v != 0 && (!found || abs_of(v) < best)) {
                        best = abs_of(v);
                        pr = r;
                        pc = c;
                        found = true;
                    }
                }
            if (!found) {
                diag.resize(n, Int(0));
                return diag;
            }
            swap_rows(M, t, pr, T.U);
            swap_cols(M, t, pc, T.V);

            bool clean = true;
            for (std::size_t r = t + 1; r < M.rows; ++r)
                if (M.at(r, t) != 0) {
                    Int q = floor_div(M.at(r, t), M.at(t, t));
                    row_op(M, r, t, q, T.U);
                    if (M.at(r, t) != 0) clean = false;
                }
            for (std::size_t c = t + 1; c < M.cols; ++c)
                if (M.at(t, c) != 0) {
                    Int q = floor_div(M.at(t, c), M.at(t, t));
                    col_op(M, c, t, q, T.V);
                    if (M.at(t, c) != 0) clean = false;
                }
            if (!clean) continue;

            // Enforce divisibility of the trailing block by the pivot.
            bool divides = true;
            for (std::size_t r = t + 1; r < M.rows && divides; ++r)
                for (std::size_t c = t + 1; c < M.cols; ++c)
                    if (M.at(r, c) % M.at(t, t) != 0) {
                        // row t += row r brings a non-multiple into row t.
                        row_op(M, t, r, Int(-1), T.U);
                        divides = false;
                        break;
                    }
            if (!divides) continue;

            if (M.at(t, t) < 0) {
                for (std::size_t c = 0; c < M.cols; ++c) M.at(t, c) = mul_sub(Int(0), Int(1), M.at(t, c));
                if (T.U)
                    for (std::size_t c = 0; c < T.U->cols; ++c) T.U->at(t, c) = mul_sub(Int(0), Int(1), T.U->at(t, c));
            }
            diag.push_back(M.at(t, t));
            break;
        }
    }
    return diag;
}

// Eliminates unit pivots on a sparse copy, then finishes the residue densely.
template <class Int>
std::vector<BigInt> sparse_invariant_factors(const SparseIntMatrix& S) {
    using Column = std::vector<std::pair<std::uint32_t, Int>>;
    std::vector<Column> cols(S.cols);
    std::vector<std::vector<std::uint32_t>> row_cols(S.rows);  // may hold stale entries
    for (std::size_t c = 0; c < S.cols; ++c) {
        for (auto [r, v] : S.columns[c]) {
            cols[c].emplace_back(r, Int(v));
            row_cols[r].push_back(static_cast<std::uint32_t>(c));
        }
    }
    std::vector<bool> row_dead(S.rows, false), col_dead(S.cols, false);
    std::size_t units = 0;

    auto entry = [&](const Column& col, std::uint32_t r) -> const Int* {
        auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::uint32_t x) { return e.first < x; });
        return (it != col.end() && it->first == r) ? &it->second : nullptr;
    };

    for (std::size_t c = 0; c < S.cols; ++c) {
        Column& pc = cols[c];
        if (pc.empty()) continue;
        // Unit entry whose row touches the fewest columns.
        std::int64_t pr = -1;
        std::size_t best = 0;
        for (const auto& [r, v] : pc)
            if (v == 1 || v == -1) {
                std::size_t load = row_cols[r].size();
                if (pr < 0 || load < best) {
                    pr = r;
                    best = load;
                }
            }
        if (pr < 0) continue;
        const std::uint32_t r = static_cast<std::uint32_t>(pr);
        const Int pivot = *entry(pc, r);

        std::vector<std::uint32_t> targets = row_cols[r];
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (std::uint32_t c2 : targets) {
            if (c2 == c || col_dead[c2]) continue;
            const Int* hit = entry(cols[c2], r);
            if (!hit) continue;
            const Int q = *hit * pivot;  // pivot is ±1, so this is hit / pivot
            Column merged;
            merged.reserve(cols[c2].size() + pc.size());
            auto a = cols[c2].begin(), ae = cols[c2].end();
            auto b = pc.begin(), be = pc.end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && a->first < b->first)) {
                    merged.push_back(*a++);
                } else if (a == ae || b->first < a->first) {
                    merged.emplace_back(b->first, mul_sub(Int(0), q, b->second));
                    row_cols[b->first].push_back(c2);
                    ++b;
                } else {
                    Int v = mul_sub(a->second, q, b->second);
                    if (v != 0) merged.emplace_back(a->first, v);
                    ++a;
                    ++b;
                }
            }
            cols[c2].swap(merged);
        }
        // Row r is now zero outside column c; column c reduces to the pivot.
        col_dead[c] = true;
        row_dead[r] = true;
        pc.clear();
        ++units;
    }

    std::vector<std::uint32_t> live_rows, live_cols;
    std::vector<std::int64_t> row_pos(S.rows, -1);
    for (std::size_t c = 0; c < S.cols; ++c)
        if (!col_dead[c] && !cols[c].empty()) {
            live_cols.push_back(static_cast<std::uint32_t>(c));
            for (const auto& [r, v] : cols[c])
                if (row_pos[r] < 0) {
                    row_pos[r] = 0;
                    live_rows.push_back(r);
                }
        }
    std::sort(live_rows.begin(), live_rows.end());
    for (std::size_t i = 0; i < live_rows.size(); ++i) row_pos[live_rows[i]] = static_cast<std::int64_t>(i);

    DenseWork<Int> D{live_rows.size(), live_cols.size(), std::vector<Int>(live_rows.size() * live_cols.size(), Int(0))};
    for (std::size_t j = 0; j < live_cols.size(); ++j)
        for (const auto& [r, v] : cols[live_cols[j]]) D.at(static_cast<std::size_t>(row_pos[r]), j) = v;
    std::vector<Int> rest = dense_snf(D, Transforms<Int>{});

    std::vector<BigInt> out(units, BigInt(1));
    for (const Int& v : rest)
        if (v != 0) out.push_back(BigInt(v));
    return out;
}

}  // namespace

SmithForm smith_normal_form(const DenseIntMatrix& M) {
    DenseWork<BigInt> W{M.rows, M.cols, M.a};
    DenseWork<BigInt> U{M.rows, M.rows, DenseIntMatrix::identity(M.rows).a};
    DenseWork<BigInt> V{M.cols, M.cols, DenseIntMatrix::identity(M.cols).a};
    SmithForm out;
    out.diagonal = dense_snf(W, Transforms<BigInt>{&U, &V});
    out.U = DenseIntMatrix(M.rows, M.rows);
    out.U.a = std::move(U.a);
    out.V = DenseIntMatrix(M.cols, M.cols);
    out.V.a = std::move(V.a);
    return out;
}

std::vector<BigInt> invariant_factors(const SparseIntMatrix& M) {
    try {
        return sparse_invariant_factors<std::int64_t>(M);
    } catch (const Overflow&) {
        return sparse_invariant_factors<BigInt>(M);
    }
}

long long HomologyResult::euler_characteristic() const {
    long long chi = 0;
    for (std::size_t d = 0; d < groups.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(groups[d].betti);
    return chi;
}

std::string HomologyResult::describe() const {
    if (groups.empty()) return "empty complex";
    std::ostringstream os;
    for (std::size_t d = 0; d < groups.size(); ++d) {
        if (d) os << ", ";
        os << "H" << d << "=";
        std::vector<std::string> parts;
        if (groups[d].betti == 1) parts.push_back("Z");
        else if (groups[d].betti > 1) parts.push_back("Z^" + std::to_string(groups[d].betti));
        for (const auto& t : groups[d].torsion) parts.push_back("Z/" + t.str());
        if (parts.empty()) os << "0";
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "+" : "") << parts[i];
    }
    return os.str();
}

HomologyResult homology(const SimplicialComplex& K) {
    HomologyResult out;
    const int dim = K.dimension();
    if (dim < 0) return out;
    const auto boundaries = boundary_matrices(K);
    // factors[d] = invariant factors of ∂_d, d = 1..dim
    std::vector<std::vector<BigInt>> factors(static_cast<std::size_t>(dim) + 2);
    for (int d = 1; d <= dim; ++d) factors[d] = invariant_factors(boundaries[d - 1]);
    for (int d = 0; d <= dim; ++d) {
        HomologyGroup g;
        const std::size_t rank_out = d >= 1 ? factors[d].size() : 0;
        const std::size_t rank_in = factors[d + 1].size();
        g.betti = K.faces(d).size() - rank_out - rank_in;
        std::vector<BigInt> tors;
        for (const auto& t : factors[d + 1])
            if (t > 1) tors.push_back(t);
        std::sort(tors.begin(), tors.end());
        g.torsion = std::move(tors);
        out.groups.push_back(std::move(g));
    }
    return out;
}

bool homology_equal(const HomologyResult& a, const HomologyResult& b) {
    if (a.empty_complex() != b.empty_complex()) return false;
    const std::size_t n = std::max(a.groups.size(), b.groups.size());
    const HomologyGroup zero;
    for (std::size_t d = 0; d < n; ++d) {
        const auto& x = d < a.groups.size() ? a.groups[d] : zero;
        const auto& y = d < b.groups.size() ? b.groups[d] : zero;
        if (!(x == y)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

namespace {

std::string order_witness(const char* map, const Poset& X, Element a, Element b) {
    return std::string(map) + " is not order-preserving on " + X.label(a) + " < " + X.label(b);
}

bool order_preserving(const Poset& X, const Poset& Y, std::span<const Element> F, const char* name,
                      std::vector<std::string>& witnesses) {
    for (auto [a, b] : X.relation())
        if (!Y.leq(F[a], F[b])) {
            witnesses.push_back(order_witness(name, X, a, b));
            return false;
        }
    return true;
}

bool equivariant(const GPoset& X, const GPoset& Y, std::span<const Element> F, const char* name,
                 std::vector<std::string>& witnesses) {
    for (std::size_t s = 0; s < X.action().size(); ++s)
        for (Element x = 0; x < X.size(); ++x)
            if (F[X.action()[s][x]] != Y.action()[s][F[x]]) {
                witnesses.push_back(std::string(name) + " is not equivariant for generator " + std::to_string(s) +
                                    " at " + X.poset().label(x));
                return false;
            }
    return true;
}

int direction(const Poset& X, std::span<const Element> round_trip, const char* name,
              std::vector<std::string>& witnesses) {
    bool up = true, down = true;
    std::optional<Element> up_fail, down_fail;
    for (Element x = 0; x < X.size(); ++x) {
        if (up && !X.leq(x, round_trip[x])) {
            up = false;
            up_fail = x;
        }
        if (down && !X.leq(round_trip[x], x)) {
            down = false;
            down_fail = x;
        }
    }
    if (up && down) return 2;
    if (up) return 1;
    if (down) return -1;
    witnesses.push_back(std::string(name) + " is comparable in neither direction: fails x <= " + name + "(x) at " +
                        X.label(*up_fail) + " and " + name + "(x) <= x at " + X.label(*down_fail));
    return 0;
}

}  // namespace

QuillenCertificate quillen_pair_check(const GPoset& X, const GPoset& Y, std::span<const Element> F,
                                      std::span<const Element> H) {
    QuillenCertificate cert;
    if (F.size() != X.size() || H.size() != Y.size()) throw std::invalid_argument("map size mismatch");
    if (X.action().size() != Y.action().size()) throw std::invalid_argument("actions use different generator lists");
    for (Element y : F)
        if (y >= Y.size()) throw std::invalid_argument("F maps outside Y");
    for (Element x : H)
        if (x >= X.size()) throw std::invalid_argument("H maps outside X");

    cert.forward_order_preserving = order_preserving(X.poset(), Y.poset(), F, "F", cert.witnesses);
    cert.backward_order_preserving = order_preserving(Y.poset(), X.poset(), H, "H", cert.witnesses);
    cert.forward_equivariant = equivariant(X, Y, F, "F", cert.witnesses);
    cert.backward_equivariant = equivariant(Y, X, H, "H", cert.witnesses);

    std::vector<Element> hf(X.size()), fh(Y.size());
    for (Element x = 0; x < X.size(); ++x) hf[x] = H[F[x]];
    for (Element y = 0; y < Y.size(); ++y) fh[y] = F[H[y]];
    cert.source_direction = direction(X.poset(), hf, "HF", cert.witnesses);
    cert.target_direction = direction(Y.poset(), fh, "FH", cert.witnesses);
    return cert;
}

IsoCheck poset_iso_check(const Poset& X, const Poset& Y, std::span<const Element> f) {
    IsoCheck out;
    if (X.size() != Y.size()) {
        out.witness = "sizes differ: " + std::to_string(X.size()) + " vs " + std::to_string(Y.size());
        return out;
    }
    if (f.size() != X.size()) {
        out.witness = "map is not defined on every element";
        return out;
    }
    std::vector<std::int64_t> inverse(Y.size(), -1);
    for (Element x = 0; x < f.size(); ++x) {
        if (f[x] >= Y.size() || inverse[f[x]] >= 0) {
            out.witness = "map is not a bijection at " + X.label(x);
            return out;
        }
        inverse[f[x]] = x;
    }
    for (auto [a, b] : X.relation())
        if (!Y.less(f[a], f[b])) {
            out.witness = "f is not order-preserving on " + X.label(a) + " < " + X.label(b);
            return out;
        }
    for (auto [a, b] : Y.relation()) {
        Element xa = static_cast<Element>(inverse[a]), xb = static_cast<Element>(inverse[b]);
        if (!X.less(xa, xb)) {
            out.witness = "inverse is not order-preserving on " + Y.label(a) + " < " + Y.label(b);
            return out;
        }
    }
    out.pass = true;
    return out;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

}  // namespace

std::string to_dot(const Poset& X, const std::string& name, const std::vector<Element>* orbit_of) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=BT;\n  node [shape=box, style=filled];\n";
    Element orbit_count = 0;
    if (orbit_of)
        for (Element o : *orbit_of) orbit_count = std::max<Element>(orbit_count, o + 1);
    for (Element a = 0; a < X.size(); ++a) {
        os << "  n" << a << " [label=\"" << dot_escape(X.label(a)) << "\"";
        if (orbit_of) {
            double hue = orbit_count ? static_cast<double>((*orbit_of)[a]) / orbit_count : 0.0;
            os << ", fillcolor=\"" << hue << " 0.35 0.95\"";
        } else {
            os << ", fillcolor=\"white\"";
        }
        os << "];\n";
    }
    for (auto [a, b] : X.covering()) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace commcat::topo
