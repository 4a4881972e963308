#include "commcat/group_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace commcat::alg {

using ff::Matrix;
using ff::Polynomial;

GroupAlgebraElement::GroupAlgebraElement(const Field& f, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& [g, c] : terms) {
        if (!terms_.empty() && terms_.back().first == g)
            terms_.back().second = f.add(terms_.back().second, c);
        else
            terms_.emplace_back(g, c);
    }
    std::erase_if(terms_, [](const Term& t) { return t.second.is_zero(); });
}

FieldElement GroupAlgebraElement::coefficient(Index g) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), g, [](const Term& t, Index v) { return t.first < v; });
    if (it == terms_.end() || it->first != g) return FieldElement{};
    return it->second;
}

GroupAlgebraElement GroupAlgebraElement::add(const Field& f, const GroupAlgebraElement& o) const {
    auto all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return GroupAlgebraElement(f, std::move(all));
}

GroupAlgebraElement GroupAlgebraElement::scale(const Field& f, FieldElement s) const {
    auto all = terms_;
    for (auto& t : all) t.second = f.mul(t.second, s);
    return GroupAlgebraElement(f, std::move(all));
}

GroupAlgebraElement GroupAlgebraElement::multiply(const Field& f, const PermGroup& G,
                                                  const GroupAlgebraElement& o) const {
    std::unordered_map<Index, FieldElement> acc;
    for (auto& [a, ca] : terms_)
        for (auto& [b, cb] : o.terms_) {
            auto& slot = acc[G.mul(a, b)];
            slot = f.add(slot, f.mul(ca, cb));
        }
    return GroupAlgebraElement(f, std::vector<Term>(acc.begin(), acc.end()));
}

GroupAlgebraElement GroupAlgebraElement::conjugate(const PermGroup& G, Index g) const {
    GroupAlgebraElement r;
    r.terms_.reserve(terms_.size());
    for (auto& [x, c] : terms_) r.terms_.emplace_back(G.conj(x, g), c);
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    return r;
}

GroupAlgebraElement GroupAlgebraElement::conjugate_by_table(const std::vector<Index>& table) const {
    GroupAlgebraElement r;
    r.terms_.reserve(terms_.size());
    for (auto& [x, c] : terms_) r.terms_.emplace_back(table[x], c);
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    return r;
}

GroupAlgebraElement GroupAlgebraElement::restrict_to(const std::vector<Index>& members) const {
    GroupAlgebraElement r;
    for (auto& t : terms_)
        if (std::binary_search(members.begin(), members.end(), t.first)) r.terms_.push_back(t);
    return r;
}

FieldElement augmentation(const Field& f, const GroupAlgebraElement& a) {
    FieldElement s = f.zero();
    for (auto& t : a.terms()) s = f.add(s, t.second);
    return s;
}

// ---------------------------------------------------------------------------

CentralAlgebra::CentralAlgebra(const PermGroup& G, const Field& f) : field_(&f) {
    classes_ = perm::conjugacy_classes(G);
    dim_ = classes_.size();
    identity_class_ = 0;
    std::vector<std::uint32_t> class_of(G.order());
    for (std::size_t k = 0; k < dim_; ++k)
        for (auto m : classes_[k].members) class_of[m] = static_cast<std::uint32_t>(k);
    std::vector<std::uint64_t> counts(dim_ * dim_ * dim_, 0);
    for (std::size_t k = 0; k < dim_; ++k) {
        const Index z = classes_[k].representative;
        for (std::size_t i = 0; i < dim_; ++i)
            for (auto x : classes_[i].members) {
                auto j = class_of[G.mul(G.inv(x), z)];
                ++counts[(i * dim_ + j) * dim_ + k];
            }
    }
    c_.resize(counts.size());
    for (std::size_t n = 0; n < counts.size(); ++n) c_[n] = f.from_int(static_cast<std::int64_t>(counts[n] % f.characteristic()));
}

CentralAlgebra::CentralAlgebra(const Field& f, std::size_t dim, std::vector<FieldElement> constants,
                               std::size_t identity_class, std::vector<perm::ConjugacyClass> classes)
    : field_(&f), dim_(dim), classes_(std::move(classes)), identity_class_(identity_class), c_(std::move(constants)) {
    if (c_.size() != dim * dim * dim) throw ff::FieldError("structure constant table has wrong size");
}

Vector CentralAlgebra::one() const { return basis(identity_class_); }

Vector CentralAlgebra::basis(std::size_t i) const {
    Vector v = zero();
    v[i] = field_->one();
    return v;
}

Vector CentralAlgebra::add(const Vector& a, const Vector& b) const {
    Vector r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = field_->add(a[i], b[i]);
    return r;
}

Vector CentralAlgebra::sub(const Vector& a, const Vector& b) const {
    Vector r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = field_->sub(a[i], b[i]);
    return r;
}

Vector CentralAlgebra::scale(const Vector& a, FieldElement s) const {
    Vector r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = field_->mul(a[i], s);
    return r;
}

Vector CentralAlgebra::multiply(const Vector& a, const Vector& b) const {
    const Field& F = *field_;
    Vector r = zero();
    for (std::size_t i = 0; i < dim_; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (b[j].is_zero()) continue;
            const auto s = F.mul(a[i], b[j]);
            const FieldElement* row = &c_[(i * dim_ + j) * dim_];
            for (std::size_t k = 0; k < dim_; ++k)
                if (!row[k].is_zero()) r[k] = F.add(r[k], F.mul(s, row[k]));
        }
    }
    return r;
}

Vector CentralAlgebra::power(const Vector& a, std::uint64_t e) const {
    Vector result = one();
    Vector base = a;
    while (e) {
        if (e & 1) result = multiply(result, base);
        base = multiply(base, base);
        e >>= 1;
    }
    return result;
}

bool CentralAlgebra::is_zero(const Vector& a) const {
    return std::all_of(a.begin(), a.end(), [](FieldElement v) { return v.is_zero(); });
}

Matrix CentralAlgebra::frobenius_matrix() const {
    std::vector<Vector> cols;
    for (std::size_t i = 0; i < dim_; ++i) cols.push_back(power(basis(i), field_->order()));
    return Matrix::from_columns(*field_, dim_, cols);
}

GroupAlgebraElement CentralAlgebra::expand(const Vector& coords, const std::vector<Index>& ambient) const {
    std::vector<GroupAlgebraElement::Term> terms;
    for (std::size_t k = 0; k < dim_; ++k) {
        if (coords[k].is_zero()) continue;
        for (auto m : classes_[k].members) terms.emplace_back(ambient.empty() ? m : ambient[m], coords[k]);
    }
    return GroupAlgebraElement(*field_, std::move(terms));
}

GroupAlgebraElement CentralAlgebra::expand(const Vector& coords) const { return expand(coords, {}); }

// ---------------------------------------------------------------------------

Polynomial min_poly(const CentralAlgebra& A, const Vector& a, const Vector& unit) {
    const Field& F = A.field();
    std::vector<Vector> powers{unit};
    Vector cur = A.multiply(a, unit);
    while (true) {
        auto M = Matrix::from_columns(F, A.dimension(), powers);
        try {
            auto c = M.solve(cur);
            Vector coeffs(c.size() + 1);
            for (std::size_t i = 0; i < c.size(); ++i) coeffs[i] = F.neg(c[i]);
            coeffs.back() = F.one();
            return Polynomial(F, std::move(coeffs));
        } catch (const ff::InconsistentSystem&) {
        }
        powers.push_back(cur);
        cur = A.multiply(cur, a);
    }
}

Polynomial min_poly(const CentralAlgebra& A, const Vector& a) { return min_poly(A, a, A.one()); }

std::vector<Vector> semisimple_part(const CentralAlgebra& A) { return A.frobenius_matrix().stable_image(); }

namespace {

bool coords_less(const Vector& a, const Vector& b) { return a < b; }

/// Basis of {v : v^q = v}; this subalgebra is a product of copies of the base field,
/// one per primitive idempotent.
std::vector<Vector> frobenius_fixed(const CentralAlgebra& A) {
    auto M = A.frobenius_matrix();
    const Field& F = A.field();
    for (std::size_t i = 0; i < A.dimension(); ++i) M.at(i, i) = F.sub(M.at(i, i), F.one());
    return M.kernel_basis();
}

}  // namespace

std::vector<Vector> primitive_idempotents(const CentralAlgebra& A) {
    const Field& F = A.field();
    auto fixed = frobenius_fixed(A);
    std::vector<Vector> idems{A.one()};
    for (const auto& v : fixed) {
        std::vector<Vector> next;
        for (const auto& eps : idems) {
            Vector w = A.multiply(eps, v);
            auto m = min_poly(A, w, eps);
            auto rts = ff::roots(m);
            if (static_cast<int>(rts.size()) != m.degree())
                throw ff::FieldError("idempotent splitting: minimal polynomial does not split into distinct roots");
            if (rts.size() <= 1) {
                next.push_back(eps);
                continue;
            }
            // Lagrange idempotents: prod_{j != i} (w - c_j eps) / (c_i - c_j)
            for (std::size_t i = 0; i < rts.size(); ++i) {
                Vector e = eps;
                for (std::size_t j = 0; j < rts.size(); ++j) {
                    if (j == i) continue;
                    Vector factor = A.sub(w, A.scale(eps, rts[j]));
                    e = A.multiply(e, A.scale(factor, F.inv(F.sub(rts[i], rts[j]))));
                }
                next.push_back(std::move(e));
            }
        }
        idems = std::move(next);
    }
    if (idems.size() != fixed.size())
        throw ff::FieldError("idempotent splitting produced " + std::to_string(idems.size()) +
                             " idempotents, expected " + std::to_string(fixed.size()));
    std::sort(idems.begin(), idems.end(), coords_less);
    return idems;
}

std::vector<Vector> brute_force_central_idempotents(const CentralAlgebra& A, std::uint64_t bound) {
    const Field& F = A.field();
    const auto q = F.order();
    const auto n = A.dimension();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= q;
        if (total > bound)
            throw OracleBoundExceeded("brute-force oracle needs more than " + std::to_string(bound) + " elements");
    }
    std::vector<Vector> idempotents;
    Vector v = A.zero();
    for (std::uint64_t code = 1; code < total; ++code) {
        // increment v as a base-q counter
        for (std::size_t i = 0; i < n; ++i) {
            auto c = v[i].code() + 1;
            if (c < q) {
                v[i] = FieldElement{c};
                break;
            }
            v[i] = FieldElement{0};
        }
        if (A.multiply(v, v) == v) idempotents.push_back(v);
    }
    std::vector<Vector> primitive;
    for (const auto& e : idempotents) {
        bool decomposes = false;
        for (const auto& f : idempotents) {
            if (f == e) continue;
            if (A.multiply(f, e) == f) {
                decomposes = true;
                break;
            }
        }
        if (!decomposes) primitive.push_back(e);
    }
    std::sort(primitive.begin(), primitive.end(), coords_less);
    return primitive;
}

std::vector<Block> blocks_from_algebra(const PermGroup& G, const CentralAlgebra& A) {
    return blocks_from_coordinates(G, A, primitive_idempotents(A));
}

std::vector<Block> blocks_from_coordinates(const PermGroup& G, const CentralAlgebra& A, std::vector<Vector> coords) {
    const Field& F = A.field();
    if (coords.size() != frobenius_fixed(A).size())
        throw std::invalid_argument("number of idempotents differs from the number of blocks");
    std::sort(coords.begin(), coords.end());
    Vector sum = A.zero();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].size() != A.dimension()) throw std::invalid_argument("coordinate vector has the wrong length");
        if (A.is_zero(coords[i])) throw std::invalid_argument("zero idempotent");
        if (A.multiply(coords[i], coords[i]) != coords[i]) throw std::invalid_argument("coordinates are not idempotent");
        for (std::size_t j = i + 1; j < coords.size(); ++j)
            if (!A.is_zero(A.multiply(coords[i], coords[j])))
                throw std::invalid_argument("idempotents are not orthogonal");
        sum = A.add(sum, coords[i]);
    }
    if (sum != A.one()) throw std::invalid_argument("idempotents do not sum to 1");
    std::vector<Block> out;
    for (auto& e : coords) {
        Block b;
        b.owner = G.label();
        b.class_coords = e;
        b.idempotent = A.expand(e);
        b.augmentation = augmentation(F, b.idempotent);
        b.principal = b.augmentation == F.one();
        out.push_back(std::move(b));
    }
    std::stable_partition(out.begin(), out.end(), [](const Block& b) { return b.principal; });
    return out;
}

std::vector<Block> blocks(const PermGroup& G, const Field& f) {
    CentralAlgebra A(G, f);
    return blocks_from_algebra(G, A);
}

std::uint32_t auto_split_degree(const PermGroup& G, std::uint32_t p) {
    auto e = G.exponent();
    while (e % p == 0) e /= p;
    return static_cast<std::uint32_t>(ff::multiplicative_order(p, e));
}

}  // namespace commcat::alg
