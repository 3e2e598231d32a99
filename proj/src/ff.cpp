#include "unitsum/ff.hpp"

#include <algorithm>

#include "unitsum/kernels.hpp"

namespace unitsum {

namespace {

constexpr std::uint32_t kMaxP = (1u << 21) - 1;

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// --- raw polynomial helpers over GF(p), used before Polynomial exists ---
// Vectors are ascending coefficient lists with trailing zeros trimmed.

using PVec = std::vector<std::uint32_t>;

void pv_trim(PVec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PVec pv_mulmod(const PVec& a, const PVec& b, const PVec& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    PVec prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            kernels::mod_axpy(prod.data() + i, b.data(), a[i], b.size(), p);
    // m is monic of degree d; reduce from the top
    std::size_t d = m.size() - 1;
    for (std::size_t i = prod.size(); i-- > d;) {
        std::uint32_t c = prod[i];
        if (!c) continue;
        prod[i] = 0;
        for (std::size_t j = 0; j < d; ++j)
            prod[i - d + j] = static_cast<std::uint32_t>(
                (prod[i - d + j] + static_cast<std::uint64_t>(c) * (p - m[j])) % p);
    }
    prod.resize(d);
    pv_trim(prod);
    return prod;
}

PVec pv_powmod(PVec base, std::uint64_t e, const PVec& m, std::uint32_t p) {
    PVec r{1};
    while (e) {
        if (e & 1) r = pv_mulmod(r, base, m, p);
        base = pv_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

PVec pv_gcd(PVec a, PVec b, std::uint32_t p) {
    pv_trim(a);
    pv_trim(b);
    auto inv_mod_p = [p](std::uint32_t x) {
        // extended Euclid on integers
        long long t = 0, nt = 1, r = p, nr = x;
        while (nr) {
            long long qq = r / nr;
            std::swap(t -= qq * nt, nt);
            std::swap(r -= qq * nr, nr);
        }
        return static_cast<std::uint32_t>(t < 0 ? t + p : t);
    };
    while (!b.empty()) {
        // a mod b
        std::uint32_t lb = inv_mod_p(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            std::uint32_t c = static_cast<std::uint32_t>(
                (static_cast<std::uint64_t>(a.back()) * lb) % p);
            std::size_t off = a.size() - b.size();
            for (std::size_t j = 0; j < b.size(); ++j)
                a[off + j] = static_cast<std::uint32_t>(
                    (a[off + j] + static_cast<std::uint64_t>(c) * (p - b[j])) % p);
            pv_trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

// Deterministic irreducibility over GF(p): x^(p^n) = x mod f, and for every
// prime r | n the gcd of x^(p^(n/r)) - x with f is constant.
bool pv_irreducible(const PVec& f, std::uint32_t p) {
    std::size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    auto frob_power = [&](std::uint64_t rounds) {
        PVec g{0, 1}; // x
        for (std::uint64_t i = 0; i < rounds; ++i) g = pv_powmod(g, p, f, p);
        return g;
    };
    PVec xqn = frob_power(n);
    if (!(xqn.size() == 2 && xqn[0] == 0 && xqn[1] == 1)) return false;
    for (std::size_t r = 2; r <= n; ++r) {
        if (n % r) continue;
        bool rp = true;
        for (std::size_t d = 2; d * d <= r; ++d)
            if (r % d == 0) { rp = false; break; }
        if (!rp) continue;
        PVec g = frob_power(n / r);
        // g - x
        if (g.size() < 2) g.resize(2, 0);
        g[1] = g[1] ? g[1] - 1 : p - 1;
        pv_trim(g);
        PVec d = pv_gcd(f, g, p);
        if (d.size() > 1) return false;
    }
    return true;
}

} // namespace

FieldRef FieldSpec::prime(std::uint64_t p) {
    if (p > kMaxP)
        throw FieldTooLarge("characteristic " + std::to_string(p) +
                            " exceeds the 2^21 cap");
    if (!is_prime_u64(p))
        throw Error("characteristic " + std::to_string(p) + " is not prime");
    auto s = std::shared_ptr<FieldSpec>(new FieldSpec());
    s->p_ = static_cast<std::uint32_t>(p);
    s->k_ = 1;
    s->q_ = p;
    return s;
}

FieldRef FieldSpec::extension(std::uint64_t p, unsigned k,
                              std::vector<std::uint32_t> modulus) {
    if (k == 0) throw Error("extension degree must be positive");
    if (k == 1) {
        if (!modulus.empty())
            throw Error("prime fields take no modulus");
        return prime(p);
    }
    if (p > kMaxP)
        throw FieldTooLarge("characteristic too large");
    if (k > 30)
        throw FieldTooLarge("extension degree above 30");
    if (!is_prime_u64(p))
        throw Error("characteristic " + std::to_string(p) + " is not prime");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (q > (std::uint64_t(1) << 62) / p)
            throw FieldTooLarge("q = p^k does not fit in 64 bits");
        q *= p;
    }
    if (modulus.size() != k + 1)
        throw Error("modulus must have degree k");
    for (auto& c : modulus) c %= static_cast<std::uint32_t>(p);
    if (modulus.back() != 1)
        throw Error("modulus must be monic");
    if (!pv_irreducible(modulus, static_cast<std::uint32_t>(p)))
        throw Error("modulus is not irreducible");
    auto s = std::shared_ptr<FieldSpec>(new FieldSpec());
    s->p_ = static_cast<std::uint32_t>(p);
    s->k_ = k;
    s->q_ = q;
    s->mod_ = std::move(modulus);
    s->neg_mod_.resize(k);
    for (unsigned j = 0; j < k; ++j)
        s->neg_mod_[j] = (s->p_ - s->mod_[j]) % s->p_;
    return s;
}

FieldRef FieldSpec::extension(std::uint64_t p, unsigned k) {
    if (k == 1) return prime(p);
    if (p > kMaxP)
        throw FieldTooLarge("characteristic too large");
    if (k > 30)
        throw FieldTooLarge("extension degree above 30");
    if (!is_prime_u64(p))
        throw Error("characteristic " + std::to_string(p) + " is not prime");
    // first monic irreducible of degree k in canonical index order
    std::uint64_t span = 1;
    for (unsigned i = 0; i < k; ++i) {
        span *= p;
        if (span > (std::uint64_t(1) << 40))
            throw FieldTooLarge("default modulus search space too large");
    }
    for (std::uint64_t idx = 0; idx < span; ++idx) {
        PVec cand(k + 1, 0);
        std::uint64_t v = idx;
        for (unsigned i = 0; i < k; ++i) {
            cand[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        cand[k] = 1;
        if (pv_irreducible(cand, static_cast<std::uint32_t>(p)))
            return extension(p, k, std::move(cand));
    }
    throw Error("no irreducible modulus found"); // unreachable
}

bool FieldSpec::same(const FieldSpec& other) const {
    return p_ == other.p_ && k_ == other.k_ && mod_ == other.mod_;
}

std::string FieldSpec::text() const {
    if (k_ == 1) return "GF(" + std::to_string(p_) + ")";
    std::string s = "GF(" + std::to_string(q_) + "):";
    bool first = true;
    for (unsigned i = k_ + 1; i-- > 0;) {
        std::uint32_t c = mod_[i];
        if (!c) continue;
        if (!first) s += "+";
        first = false;
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) s += std::to_string(c) + "*";
            s += i == 1 ? "t" : "t^" + std::to_string(i);
        }
    }
    return s;
}

FieldElement FieldSpec::zero() const {
    return FieldElement(shared_from_this(), std::vector<std::uint32_t>(k_, 0));
}

FieldElement FieldSpec::one() const {
    std::vector<std::uint32_t> c(k_, 0);
    c[0] = 1;
    return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldSpec::from_int(long long v) const {
    long long m = v % static_cast<long long>(p_);
    if (m < 0) m += p_;
    std::vector<std::uint32_t> c(k_, 0);
    c[0] = static_cast<std::uint32_t>(m);
    return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldSpec::element(std::vector<std::uint32_t> coeffs) const {
    if (coeffs.size() > k_)
        throw Error("coefficient vector longer than extension degree");
    coeffs.resize(k_, 0);
    for (auto& c : coeffs) c %= p_;
    return FieldElement(shared_from_this(), std::move(coeffs));
}

FieldElement FieldSpec::from_index(std::uint64_t index) const {
    std::vector<std::uint32_t> c(k_, 0);
    for (unsigned i = 0; i < k_; ++i) {
        c[i] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    if (index)
        throw Error("element index out of range");
    return FieldElement(shared_from_this(), std::move(c));
}

void FieldSpec::s_zero(std::uint32_t* r) const {
    std::fill(r, r + k_, 0u);
}

void FieldSpec::s_copy(const std::uint32_t* a, std::uint32_t* r) const {
    std::copy(a, a + k_, r);
}

bool FieldSpec::s_is_zero(const std::uint32_t* a) const {
    for (unsigned i = 0; i < k_; ++i)
        if (a[i]) return false;
    return true;
}

bool FieldSpec::s_eq(const std::uint32_t* a, const std::uint32_t* b) const {
    return std::equal(a, a + k_, b);
}

void FieldSpec::s_add(const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* r) const {
    kernels::mod_add(r, a, b, k_, p_);
}

void FieldSpec::s_sub(const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* r) const {
    kernels::mod_sub(r, a, b, k_, p_);
}

void FieldSpec::s_neg(const std::uint32_t* a, std::uint32_t* r) const {
    for (unsigned i = 0; i < k_; ++i)
        r[i] = a[i] ? p_ - a[i] : 0;
}

void FieldSpec::s_mul(const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* r) const {
    if (k_ == 1) {
        r[0] = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(a[0]) * b[0]) % p_);
        return;
    }
    std::uint32_t buf[64] = {0};
    for (unsigned i = 0; i < k_; ++i)
        if (a[i])
            kernels::mod_axpy(buf + i, b, a[i], k_, p_);
    for (unsigned i = 2 * k_ - 2; i >= k_; --i) {
        std::uint32_t c = buf[i];
        if (c) {
            buf[i] = 0;
            kernels::mod_axpy(buf + i - k_, neg_mod_.data(), c, k_, p_);
        }
        if (i == k_) break;
    }
    std::copy(buf, buf + k_, r);
}

void FieldSpec::s_pow(const std::uint32_t* a, std::uint64_t e,
                      std::uint32_t* r) const {
    std::vector<std::uint32_t> base(a, a + k_), acc(k_, 0), tmp(k_, 0);
    acc[0] = 1;
    while (e) {
        if (e & 1) {
            s_mul(acc.data(), base.data(), tmp.data());
            acc.swap(tmp);
        }
        e >>= 1;
        if (e) {
            s_mul(base.data(), base.data(), tmp.data());
            base.swap(tmp);
        }
    }
    std::copy(acc.begin(), acc.end(), r);
}

void FieldSpec::s_inv(const std::uint32_t* a, std::uint32_t* r) const {
    if (s_is_zero(a)) throw DivisionByZero();
    if (k_ == 1) {
        long long t = 0, nt = 1, rr = p_, nr = a[0];
        while (nr) {
            long long qq = rr / nr;
            std::swap(t -= qq * nt, nt);
            std::swap(rr -= qq * nr, nr);
        }
        r[0] = static_cast<std::uint32_t>(t < 0 ? t + p_ : t);
        return;
    }
    s_pow(a, q_ - 2, r);
}

std::uint64_t FieldSpec::s_index(const std::uint32_t* a) const {
    std::uint64_t idx = 0;
    for (unsigned i = k_; i-- > 0;)
        idx = idx * p_ + a[i];
    return idx;
}

// ---- FieldElement ----

namespace {
const FieldSpec& need(const FieldElement& e) {
    if (!e.valid()) throw Error("uninitialized field element");
    return *e.field();
}
void need_same(const FieldElement& a, const FieldElement& b) {
    if (!need(a).same(need(b))) throw MixedFields();
}
} // namespace

bool FieldElement::is_zero() const {
    return need(*this).s_is_zero(c_.data());
}

bool FieldElement::is_one() const {
    const auto& f = need(*this);
    if (c_[0] != 1) return false;
    for (unsigned i = 1; i < f.k(); ++i)
        if (c_[i]) return false;
    return true;
}

std::uint64_t FieldElement::index() const {
    return need(*this).s_index(c_.data());
}

std::string FieldElement::text() const {
    const auto& f = need(*this);
    std::string s;
    bool first = true;
    for (unsigned i = f.k(); i-- > 0;) {
        std::uint32_t c = c_[i];
        if (!c) continue;
        if (!first) s += "+";
        first = false;
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) s += std::to_string(c) + "*";
            s += i == 1 ? "t" : "t^" + std::to_string(i);
        }
    }
    return first ? "0" : s;
}

FieldElement FieldElement::operator-() const {
    const auto& f = need(*this);
    std::vector<std::uint32_t> r(f.k());
    f.s_neg(c_.data(), r.data());
    return FieldElement(f_, std::move(r));
}

FieldElement FieldElement::inverse() const {
    const auto& f = need(*this);
    std::vector<std::uint32_t> r(f.k());
    f.s_inv(c_.data(), r.data());
    return FieldElement(f_, std::move(r));
}

FieldElement FieldElement::pow(long long e) const {
    const auto& f = need(*this);
    if (e < 0) return inverse().pow(-e);
    std::vector<std::uint32_t> r(f.k());
    f.s_pow(c_.data(), static_cast<std::uint64_t>(e), r.data());
    return FieldElement(f_, std::move(r));
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    need_same(a, b);
    std::vector<std::uint32_t> r(a.c_.size());
    a.f_->s_add(a.c_.data(), b.c_.data(), r.data());
    return FieldElement(a.f_, std::move(r));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    need_same(a, b);
    std::vector<std::uint32_t> r(a.c_.size());
    a.f_->s_sub(a.c_.data(), b.c_.data(), r.data());
    return FieldElement(a.f_, std::move(r));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    need_same(a, b);
    std::vector<std::uint32_t> r(a.c_.size());
    a.f_->s_mul(a.c_.data(), b.c_.data(), r.data());
    return FieldElement(a.f_, std::move(r));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    need_same(a, b);
    return a * b.inverse();
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    if (!a.valid() || !b.valid()) return a.valid() == b.valid();
    if (!a.f_->same(*b.f_)) return false;
    return a.c_ == b.c_;
}

bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
}

// ---- derived operations ----

FieldElement absolute_trace(const FieldElement& c) {
    const auto& f = need(c);
    FieldElement acc = c;
    FieldElement cur = c;
    for (unsigned i = 1; i < f.k(); ++i) {
        cur = cur.pow(f.p());
        acc = acc + cur;
    }
    return acc;
}

FieldElement frobenius_root(const FieldElement& c) {
    const auto& f = need(c);
    FieldElement r = c;
    for (unsigned i = 1; i < f.k(); ++i) r = r.pow(f.p());
    return r; // c^(p^(k-1)) = c^(q/p)
}

std::optional<FieldElement> sqrt_elem(const FieldElement& c) {
    const auto& f = need(c);
    if (c.is_zero()) return f.zero();
    if (f.p() == 2) return frobenius_root(c); // squaring is bijective
    std::uint64_t q = f.q();
    if (c.pow(static_cast<long long>((q - 1) / 2)) != f.one())
        return std::nullopt; // Euler criterion
    // Tonelli-Shanks in GF(q)*: q - 1 = 2^s * m with m odd
    std::uint64_t m = q - 1;
    unsigned s = 0;
    while ((m & 1) == 0) { m >>= 1; ++s; }
    FieldElement r, z;
    if (s == 1) {
        r = c.pow(static_cast<long long>((q + 1) / 4));
    } else {
        // first non-residue in canonical order
        FieldElement n;
        for (std::uint64_t i = 2; i < q; ++i) {
            n = f.from_index(i);
            if (!n.is_zero() &&
                n.pow(static_cast<long long>((q - 1) / 2)) != f.one())
                break;
        }
        z = n.pow(static_cast<long long>(m));
        r = c.pow(static_cast<long long>((m + 1) / 2));
        FieldElement t = c.pow(static_cast<long long>(m));
        unsigned e = s;
        while (!t.is_one()) {
            FieldElement t2 = t;
            unsigned i = 0;
            while (!t2.is_one()) { t2 = t2 * t2; ++i; }
            FieldElement b = z;
            for (unsigned j = 0; j + i + 1 < e; ++j) b = b * b;
            r = r * b;
            z = b * b;
            t = t * z;
            e = i;
        }
    }
    FieldElement nr = -r;
    return r.index() <= nr.index() ? r : nr;
}

std::optional<FieldElement> artin_schreier_solve(const FieldElement& c) {
    const auto& f = need(c);
    if (f.p() != 2)
        throw WrongCharacteristic("artin_schreier_solve needs characteristic 2");
    if (!absolute_trace(c).is_zero()) return std::nullopt;
    unsigned k = f.k();
    if (k == 1) return f.zero(); // c has trace 0, i.e. c = 0; roots {0, 1}
    // GF(2)-linear system: column j is the coefficient vector of t^(2j)+t^j.
    // Rows are packed as bitmasks with the rhs in bit k.
    std::vector<std::uint64_t> rows(k, 0);
    for (unsigned j = 0; j < k; ++j) {
        std::vector<std::uint32_t> e(k, 0), sq(k, 0);
        e[j] = 1;
        f.s_mul(e.data(), e.data(), sq.data());
        for (unsigned i = 0; i < k; ++i) {
            std::uint32_t bit = (sq[i] ^ e[i]) & 1u;
            if (bit) rows[i] |= std::uint64_t(1) << j;
        }
    }
    for (unsigned i = 0; i < k; ++i)
        if (c.coeffs()[i] & 1u) rows[i] |= std::uint64_t(1) << k;
    // Gaussian elimination over GF(2)
    std::vector<int> pivot_of_col(k, -1);
    unsigned rank = 0;
    for (unsigned col = 0; col < k && rank < k; ++col) {
        unsigned sel = rank;
        while (sel < k && !(rows[sel] >> col & 1u)) ++sel;
        if (sel == k) continue;
        std::swap(rows[rank], rows[sel]);
        for (unsigned i = 0; i < k; ++i)
            if (i != rank && (rows[i] >> col & 1u)) rows[i] ^= rows[rank];
        pivot_of_col[col] = static_cast<int>(rank);
        ++rank;
    }
    for (unsigned i = rank; i < k; ++i)
        if (rows[i] >> k & 1u) return std::nullopt; // inconsistent (trace said otherwise)
    std::vector<std::uint32_t> a(k, 0);
    for (unsigned col = 0; col < k; ++col)
        if (pivot_of_col[col] >= 0)
            a[col] = rows[pivot_of_col[col]] >> k & 1u;
    FieldElement r = f.element(a);
    FieldElement r2 = r + f.one(); // the other root
    return r.index() <= r2.index() ? r : r2;
}

std::vector<FieldElement> enumerate(const FieldRef& field) {
    if (!field) throw Error("null field");
    if (field->q() > FieldSpec::kDeskScaleCap)
        throw FieldTooLarge("enumeration above desk-scale cap q <= 2^20");
    std::vector<FieldElement> out;
    out.reserve(static_cast<std::size_t>(field->q()));
    for (std::uint64_t i = 0; i < field->q(); ++i)
        out.push_back(field->from_index(i));
    return out;
}

} // namespace unitsum
