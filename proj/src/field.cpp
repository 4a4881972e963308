#include "commcat/field.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace commcat::ff {

namespace {

bool prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

constexpr std::uint64_t kMaxFieldOrder = 1u << 22;

}  // namespace

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n) {
    if (n == 1) return 1;
    std::uint64_t x = a % n;
    std::uint64_t k = 1;
    while (x != 1) {
        x = (x * a) % n;
        ++k;
        if (k > n) throw FieldError("multiplicative_order: arguments not coprime");
    }
    return k;
}

Field::Field(std::uint32_t p, std::uint32_t degree) : p_(p), d_(degree) {
    if (!prime(p)) throw FieldError("field characteristic must be prime, got " + std::to_string(p));
    if (degree < 1) throw FieldError("field degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < degree; ++i) {
        q *= p;
        if (q > kMaxFieldOrder) throw FieldError("field order exceeds supported bound 2^22");
    }
    q_ = static_cast<std::uint32_t>(q);
    if (d_ == 1) {
        for (std::uint32_t c = 1; c < p_; ++c)
            if (multiplicative_order(c, p_) == p_ - 1) {
                generator_ = c;
                break;
            }
        return;
    }
    Field base(p);
    auto m = least_irreducible(base, d_);
    for (auto c : m.coefficients()) modulus_.push_back(c.code());

    // Log tables from the first primitive element in code order.
    for (std::uint32_t cand = 1; cand < q_; ++cand) {
        std::vector<std::uint32_t> powers{1};
        FieldElement x{cand};
        FieldElement cur = one();
        for (std::uint32_t k = 1; k < q_; ++k) {
            cur = raw_mul(cur, x);
            if (cur == one()) break;
            powers.push_back(cur.code());
        }
        if (powers.size() == q_ - 1) {
            generator_ = cand;
            exp_ = std::move(powers);
            log_.assign(q_, 0);
            for (std::uint32_t k = 0; k < exp_.size(); ++k) log_[exp_[k]] = k;
            return;
        }
    }
    throw FieldError("no primitive element found");
}

FieldElement Field::from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return FieldElement{static_cast<std::uint32_t>(r)};
}

std::vector<std::uint32_t> Field::coefficients(FieldElement a) const {
    std::vector<std::uint32_t> c(d_);
    std::uint32_t v = a.code();
    for (std::uint32_t i = 0; i < d_; ++i) {
        c[i] = v % p_;
        v /= p_;
    }
    return c;
}

FieldElement Field::from_coefficients(std::span<const std::uint32_t> c) const {
    if (c.size() > d_) throw FieldError("too many coefficients for field element");
    std::uint32_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + (c[i] % p_);
    return FieldElement{v};
}

FieldElement Field::add(FieldElement a, FieldElement b) const {
    if (d_ == 1) return FieldElement{(a.code() + b.code()) % p_};
    if (p_ == 2) return FieldElement{a.code() ^ b.code()};
    std::uint32_t x = a.code(), y = b.code(), r = 0, scale = 1;
    for (std::uint32_t i = 0; i < d_; ++i) {
        r += ((x % p_ + y % p_) % p_) * scale;
        x /= p_;
        y /= p_;
        scale *= p_;
    }
    return FieldElement{r};
}

FieldElement Field::neg(FieldElement a) const {
    if (d_ == 1) return FieldElement{(p_ - a.code()) % p_};
    if (p_ == 2) return a;
    std::uint32_t x = a.code(), r = 0, scale = 1;
    for (std::uint32_t i = 0; i < d_; ++i) {
        r += ((p_ - x % p_) % p_) * scale;
        x /= p_;
        scale *= p_;
    }
    return FieldElement{r};
}

FieldElement Field::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement Field::raw_mul(FieldElement a, FieldElement b) const {
    auto x = coefficients(a), y = coefficients(b);
    std::vector<std::uint64_t> prod(2 * d_, 0);
    for (std::uint32_t i = 0; i < d_; ++i)
        for (std::uint32_t j = 0; j < d_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(x[i]) * y[j]) % p_;
    // reduce with the monic modulus
    for (std::size_t k = prod.size(); k-- > d_;) {
        auto c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (std::uint32_t i = 0; i < d_; ++i)
            prod[k - d_ + i] = (prod[k - d_ + i] + (p_ - c) * modulus_[i]) % p_;
    }
    std::vector<std::uint32_t> r(prod.begin(), prod.begin() + d_);
    return from_coefficients(r);
}

FieldElement Field::mul(FieldElement a, FieldElement b) const {
    if (d_ == 1) return FieldElement{static_cast<std::uint32_t>(std::uint64_t(a.code()) * b.code() % p_)};
    if (a.is_zero() || b.is_zero()) return zero();
    return FieldElement{exp_[(log_[a.code()] + log_[b.code()]) % (q_ - 1)]};
}

FieldElement Field::inv(FieldElement a) const {
    if (a.is_zero()) throw FieldError("inversion of zero");
    if (d_ == 1) return pow(a, p_ - 2);
    return FieldElement{exp_[(q_ - 1 - log_[a.code()]) % (q_ - 1)]};
}

FieldElement Field::pow(FieldElement a, std::uint64_t e) const {
    FieldElement r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::string Field::to_string(FieldElement a) const {
    if (d_ == 1) return std::to_string(a.code());
    auto c = coefficients(a);
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        if (!first) out << '+';
        first = false;
        if (i == 0 || c[i] != 1) out << c[i];
        if (i >= 1) out << 'x';
        if (i >= 2) out << '^' << i;
    }
    return first ? "0" : out.str();
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(const Field& f, std::vector<FieldElement> coeffs) : field_(&f), c_(std::move(coeffs)) {
    trim();
}

Polynomial Polynomial::from_ints(const Field& f, std::initializer_list<std::int64_t> coeffs) {
    Vector c;
    for (auto v : coeffs) c.push_back(f.from_int(v));
    return Polynomial(f, std::move(c));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Polynomial Polynomial::monic() const {
    if (c_.empty()) return *this;
    auto s = field_->inv(c_.back());
    return *this * s;
}

Polynomial Polynomial::derivative() const {
    Vector d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(field_->mul(field_->from_int(i), c_[i]));
    return Polynomial(*field_, std::move(d));
}

FieldElement Polynomial::evaluate(FieldElement v) const {
    FieldElement r = field_->zero();
    for (std::size_t i = c_.size(); i-- > 0;) r = field_->add(field_->mul(r, v), c_[i]);
    return r;
}

std::string Polynomial::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    const bool ext = field_->degree() > 1;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) out << " + ";
        first = false;
        bool unit = c_[i] == field_->one();
        if (!unit || i == 0) out << (ext ? "(" + field_->to_string(c_[i]) + ")" : field_->to_string(c_[i]));
        if (i >= 1) out << (ext ? "T" : "x");
        if (i >= 2) out << '^' << i;
    }
    return out.str();
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Vector r(std::max(c_.size(), o.c_.size()), field_->zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->add(coefficient(i), o.coefficient(i));
    return Polynomial(*field_, std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Vector r(std::max(c_.size(), o.c_.size()), field_->zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->sub(coefficient(i), o.coefficient(i));
    return Polynomial(*field_, std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial(*field_);
    Vector r(c_.size() + o.c_.size() - 1, field_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = field_->add(r[i + j], field_->mul(c_[i], o.c_[j]));
    }
    return Polynomial(*field_, std::move(r));
}

Polynomial Polynomial::operator*(FieldElement s) const {
    Vector r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = field_->mul(c_[i], s);
    return Polynomial(*field_, std::move(r));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw FieldError("polynomial division by zero");
    Vector rem = c_;
    const auto n = divisor.c_.size();
    if (rem.size() < n) return {Polynomial(*field_), *this};
    Vector quot(rem.size() - n + 1, field_->zero());
    const auto lead_inv = field_->inv(divisor.c_.back());
    for (std::size_t k = rem.size(); k-- >= n;) {
        auto c = field_->mul(rem[k], lead_inv);
        quot[k - n + 1] = c;
        if (c.is_zero()) continue;
        for (std::size_t i = 0; i < n; ++i)
            rem[k - n + 1 + i] = field_->sub(rem[k - n + 1 + i], field_->mul(c, divisor.c_[i]));
        if (k == n - 1) break;
    }
    rem.resize(n - 1);
    return {Polynomial(*field_, std::move(quot)), Polynomial(*field_, std::move(rem))};
}

Polynomial Polynomial::powmod(std::uint64_t e, const Polynomial& m) const {
    Polynomial result = Polynomial::constant(*field_, field_->one()) % m;
    Polynomial base = *this % m;
    while (e) {
        if (e & 1) result = (result * base) % m;
        base = (base * base) % m;
        e >>= 1;
    }
    return result;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    for (std::size_t i = a.c_.size(); i-- > 0;)
        if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
}

Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

namespace {

bool is_one(const Polynomial& f) { return f.degree() == 0 && f.leading() == f.field().one(); }

/// g with g^p = f, for f whose derivative vanishes.
Polynomial pth_root(const Polynomial& f) {
    const Field& F = f.field();
    const auto p = F.characteristic();
    const std::uint64_t root_exp = F.order() / p;  // a^(q/p) is the p-th root of a
    Vector r;
    for (std::size_t i = 0; i < f.coefficients().size(); i += p) r.push_back(F.pow(f.coefficients()[i], root_exp));
    return Polynomial(F, std::move(r));
}

std::vector<std::pair<Polynomial, int>> squarefree(const Polynomial& f) {
    std::vector<std::pair<Polynomial, int>> out;
    const Field& F = f.field();
    Polynomial c = gcd(f, f.derivative());
    Polynomial w = f / c;
    int i = 1;
    while (!is_one(w)) {
        Polynomial y = gcd(w, c);
        Polynomial fac = (w / y).monic();
        if (!is_one(fac)) out.emplace_back(fac, i);
        w = y;
        c = (c / y).monic();
        ++i;
    }
    if (!is_one(c)) {
        for (auto& [g, m] : squarefree(pth_root(c))) out.emplace_back(g, m * static_cast<int>(F.characteristic()));
    }
    return out;
}

std::vector<std::pair<Polynomial, int>> distinct_degree(Polynomial g) {
    const Field& F = g.field();
    std::vector<std::pair<Polynomial, int>> out;
    const Polynomial x = Polynomial::x(F);
    Polynomial h = x % g;
    int i = 1;
    while (g.degree() >= 2 * i) {
        h = h.powmod(F.order(), g);
        Polynomial d = gcd(h - x, g);
        if (!is_one(d)) {
            out.emplace_back(d, i);
            g = (g / d).monic();
            h = h % g;
        }
        ++i;
    }
    if (g.degree() > 0) out.emplace_back(g, g.degree());
    return out;
}

void equal_degree(const Polynomial& f, int d, std::mt19937_64& rng, std::vector<Polynomial>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    const Field& F = f.field();
    const auto q = F.order();
    std::uniform_int_distribution<std::uint32_t> coeff(0, q - 1);
    while (true) {
        Vector c(f.degree());
        for (auto& v : c) v = FieldElement{coeff(rng)};
        Polynomial a(F, std::move(c));
        if (a.degree() < 1) continue;
        Polynomial b(F);
        if (q % 2 == 1) {
            // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
            Polynomial norm = Polynomial::constant(F, F.one());
            Polynomial cur = a % f;
            for (int k = 0; k < d; ++k) {
                norm = (norm * cur) % f;
                cur = cur.powmod(q, f);
            }
            b = norm.powmod((q - 1) / 2, f) - Polynomial::constant(F, F.one());
        } else {
            // absolute trace to GF(2): a + a^2 + ... + a^(2^(kd-1))
            int k = 0;
            for (auto t = q; t > 1; t >>= 1) ++k;
            Polynomial cur = a % f;
            b = cur;
            for (int s = 1; s < k * d; ++s) {
                cur = (cur * cur) % f;
                b = b + cur;
            }
        }
        Polynomial g = gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree((f / g).monic(), d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Factor> factor(const Polynomial& f) {
    if (f.is_zero()) throw FieldError("cannot factor the zero polynomial");
    std::vector<Factor> out;
    if (f.degree() == 0) return out;
    std::mt19937_64 rng(0x5eedf00dULL);
    for (auto& [sq, mult] : squarefree(f.monic())) {
        for (auto& [g, d] : distinct_degree(sq)) {
            std::vector<Polynomial> parts;
            equal_degree(g, d, rng, parts);
            for (auto& part : parts) out.push_back(Factor{part, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
        if (a.factor == b.factor) return a.multiplicity < b.multiplicity;
        return a.factor < b.factor;
    });
    return out;
}

bool is_irreducible(const Polynomial& f) {
    if (f.degree() < 1) return false;
    auto fs = factor(f);
    return fs.size() == 1 && fs.front().multiplicity == 1;
}

Polynomial least_irreducible(const Field& F, std::uint32_t d) {
    if (F.degree() != 1) throw FieldError("least_irreducible expects a prime field");
    if (d < 1) throw FieldError("least_irreducible: degree must be positive");
    const auto p = F.characteristic();
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t n = 0; n < count; ++n) {
        Vector c(d + 1);
        auto v = n;
        for (std::uint32_t i = 0; i < d; ++i) {
            c[i] = FieldElement{static_cast<std::uint32_t>(v % p)};
            v /= p;
        }
        c[d] = F.one();
        if (d >= 2 && c[0].is_zero()) continue;
        Polynomial cand(F, std::move(c));
        if (is_irreducible(cand)) return cand;
    }
    throw FieldError("no irreducible polynomial found");
}

std::vector<FieldElement> roots(const Polynomial& f) {
    std::vector<FieldElement> out;
    if (f.is_zero()) throw FieldError("roots of the zero polynomial");
    for (auto& fac : factor(f))
        if (fac.factor.degree() == 1) out.push_back(f.field().neg(fac.factor.coefficient(0)));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

Matrix::Matrix(const Field& f, std::size_t rows, std::size_t cols)
    : field_(&f), rows_(rows), cols_(cols), a_(rows * cols, f.zero()) {}

Matrix Matrix::identity(const Field& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
}

Matrix Matrix::from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& cols) {
    Matrix m(f, rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows) throw FieldError("column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
    }
    return m;
}

Vector Matrix::column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw FieldError("matrix shape mismatch");
    Matrix r(*field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            auto v = at(i, k);
            if (v.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = field_->add(r.at(i, j), field_->mul(v, o.at(k, j)));
        }
    return r;
}

Vector Matrix::operator*(const Vector& v) const {
    if (v.size() != cols_) throw FieldError("matrix-vector shape mismatch");
    Vector r(rows_, field_->zero());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if (!v[k].is_zero()) r[i] = field_->add(r[i], field_->mul(at(i, k), v[k]));
    return r;
}

std::vector<std::size_t> Matrix::reduce() {
    const Field& F = *field_;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
        std::size_t piv = row;
        while (piv < rows_ && at(piv, col).is_zero()) ++piv;
        if (piv == rows_) continue;
        if (piv != row)
            for (std::size_t c = 0; c < cols_; ++c) std::swap(at(piv, c), at(row, c));
        auto s = F.inv(at(row, col));
        for (std::size_t c = col; c < cols_; ++c) at(row, c) = F.mul(at(row, c), s);
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == row || at(r, col).is_zero()) continue;
            auto f = at(r, col);
            for (std::size_t c = col; c < cols_; ++c) at(r, c) = F.sub(at(r, c), F.mul(f, at(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t Matrix::rank() const {
    Matrix m = *this;
    return m.reduce().size();
}

std::vector<Vector> Matrix::image_basis() const {
    Matrix m = *this;
    std::vector<Vector> out;
    for (auto c : m.reduce()) out.push_back(column(c));
    return out;
}

std::vector<Vector> Matrix::kernel_basis() const {
    Matrix m = *this;
    auto pivots = m.reduce();
    std::vector<char> is_pivot(cols_, 0);
    for (auto c : pivots) is_pivot[c] = 1;
    std::vector<Vector> out;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free]) continue;
        Vector v(cols_, field_->zero());
        v[free] = field_->one();
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field_->neg(m.at(i, free));
        out.push_back(std::move(v));
    }
    return out;
}

Vector Matrix::solve(const Vector& b) const {
    if (b.size() != rows_) throw FieldError("solve: right-hand side length mismatch");
    Matrix aug(*field_, rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, cols_) = b[r];
    }
    auto pivots = aug.reduce();
    if (!pivots.empty() && pivots.back() == cols_) throw InconsistentSystem("linear system has no solution");
    Vector x(cols_, field_->zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(i, cols_);
    return x;
}

std::vector<Vector> Matrix::stable_image() const {
    if (rows_ != cols_) throw FieldError("stable_image requires a square matrix");
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < rows_; ++i) {
        Vector e(rows_, field_->zero());
        e[i] = field_->one();
        basis.push_back(std::move(e));
    }
    while (true) {
        std::vector<Vector> mapped;
        for (auto& v : basis) mapped.push_back(*this * v);
        auto next = span_basis(*field_, rows_, mapped);
        if (next.size() == basis.size()) return next;
        basis = std::move(next);
    }
}

std::vector<Vector> span_basis(const Field& f, std::size_t dim, const std::vector<Vector>& vectors) {
    Matrix m(f, vectors.size(), dim);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (vectors[r].size() != dim) throw FieldError("span_basis: vector length mismatch");
        for (std::size_t c = 0; c < dim; ++c) m.at(r, c) = vectors[r][c];
    }
    auto pivots = m.reduce();
    std::vector<Vector> out;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        Vector v(dim);
        for (std::size_t c = 0; c < dim; ++c) v[c] = m.at(r, c);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace commcat::ff
