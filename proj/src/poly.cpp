#include "unitsum/poly.hpp"

#include <algorithm>

#include "unitsum/kernels.hpp"

namespace unitsum {

namespace {
void need_same_field(const Polynomial& a, const Polynomial& b) {
    if (!a.field()->same(*b.field())) throw MixedFields();
}
} // namespace

Polynomial::Polynomial(FieldRef f) : f_(std::move(f)) {
    if (!f_) throw Error("null field");
}

Polynomial Polynomial::one(FieldRef f) {
    Polynomial r(std::move(f));
    r.c_.assign(r.f_->k(), 0);
    r.c_[0] = 1;
    return r;
}

Polynomial Polynomial::x(FieldRef f) {
    Polynomial r(std::move(f));
    r.c_.assign(2 * r.f_->k(), 0);
    r.c_[r.f_->k()] = 1;
    return r;
}

Polynomial Polynomial::constant(const FieldElement& c) {
    if (!c.valid()) throw Error("uninitialized field element");
    Polynomial r(c.field());
    r.c_ = c.coeffs();
    r.trim();
    return r;
}

Polynomial Polynomial::monomial(const FieldElement& c, int deg) {
    if (deg < 0) throw Error("negative degree");
    Polynomial r = constant(c);
    return r.shifted(deg);
}

Polynomial Polynomial::from_coeffs(const FieldRef& f, const std::vector<FieldElement>& cs) {
    Polynomial r(f);
    unsigned k = f->k();
    r.c_.assign(cs.size() * k, 0);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!cs[i].valid() || !cs[i].field()->same(*f)) throw MixedFields();
        f->s_copy(cs[i].coeffs().data(), r.c_.data() + i * k);
    }
    r.trim();
    return r;
}

Polynomial Polynomial::from_ints(const FieldRef& f, std::initializer_list<long long> cs) {
    return from_ints(f, std::vector<long long>(cs));
}

Polynomial Polynomial::from_ints(const FieldRef& f, const std::vector<long long>& cs) {
    std::vector<FieldElement> es;
    es.reserve(cs.size());
    for (long long v : cs) es.push_back(f->from_int(v));
    return from_coeffs(f, es);
}

void Polynomial::trim() {
    unsigned k = f_->k();
    while (!c_.empty() && f_->s_is_zero(c_.data() + c_.size() - k))
        c_.resize(c_.size() - k);
}

bool Polynomial::is_one() const {
    return count() == 1 && coeff(0).is_one();
}

bool Polynomial::is_monic() const {
    return !is_zero() && leading().is_one();
}

FieldElement Polynomial::coeff(int i) const {
    unsigned k = f_->k();
    if (i < 0 || static_cast<std::size_t>(i) >= count()) return f_->zero();
    std::vector<std::uint32_t> c(c_.begin() + static_cast<std::size_t>(i) * k,
                                 c_.begin() + static_cast<std::size_t>(i + 1) * k);
    return f_->element(std::move(c));
}

FieldElement Polynomial::leading() const {
    if (is_zero()) throw ZeroInput("zero polynomial has no leading coefficient");
    return coeff(degree());
}

Polynomial Polynomial::monic() const {
    if (is_zero()) throw ZeroInput("cannot normalize the zero polynomial");
    FieldElement l = leading();
    if (l.is_one()) return *this;
    return scaled(l.inverse());
}

Polynomial Polynomial::derivative() const {
    Polynomial r(f_);
    if (degree() < 1) return r;
    unsigned k = f_->k();
    r.c_.assign(c_.size() - k, 0);
    for (int i = 1; i <= degree(); ++i) {
        std::uint32_t m = static_cast<std::uint32_t>(i % f_->p());
        kernels::mod_scale(r.c_.data() + (i - 1) * k, c_.data() + i * k, m, k, f_->p());
    }
    r.trim();
    return r;
}

FieldElement Polynomial::eval(const FieldElement& at) const {
    if (!at.valid() || !at.field()->same(*f_)) throw MixedFields();
    FieldElement acc = f_->zero();
    for (int i = degree(); i >= 0; --i) acc = acc * at + coeff(i);
    return acc;
}

Polynomial Polynomial::shifted(int n) const {
    if (n < 0) throw Error("negative shift");
    if (is_zero() || n == 0) return *this;
    Polynomial r(f_);
    unsigned k = f_->k();
    r.c_.assign(c_.size() + static_cast<std::size_t>(n) * k, 0);
    std::copy(c_.begin(), c_.end(), r.c_.begin() + static_cast<std::size_t>(n) * k);
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial acc = one(f_);
    Polynomial base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Polynomial Polynomial::scaled(const FieldElement& c) const {
    if (!c.valid() || !c.field()->same(*f_)) throw MixedFields();
    Polynomial r(f_);
    if (is_zero() || c.is_zero()) return r;
    unsigned k = f_->k();
    r.c_.assign(c_.size(), 0);
    if (k == 1) {
        kernels::mod_scale(r.c_.data(), c_.data(), c.coeffs()[0], c_.size(), f_->p());
    } else {
        for (std::size_t i = 0; i < count(); ++i)
            f_->s_mul(c_.data() + i * k, c.coeffs().data(), r.c_.data() + i * k);
    }
    r.trim();
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(f_);
    r.c_.assign(c_.size(), 0);
    for (std::size_t i = 0; i < count(); ++i)
        f_->s_neg(c_.data() + i * f_->k(), r.c_.data() + i * f_->k());
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    need_same_field(a, b);
    Polynomial r = a.c_.size() >= b.c_.size() ? a : b;
    const Polynomial& s = a.c_.size() >= b.c_.size() ? b : a;
    kernels::mod_add(r.c_.data(), r.c_.data(), s.c_.data(), s.c_.size(), a.f_->p());
    r.trim();
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    need_same_field(a, b);
    Polynomial r = a;
    if (r.c_.size() < b.c_.size()) r.c_.resize(b.c_.size(), 0);
    kernels::mod_sub(r.c_.data(), r.c_.data(), b.c_.data(), b.c_.size(), a.f_->p());
    r.trim();
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    need_same_field(a, b);
    Polynomial r(a.f_);
    if (a.is_zero() || b.is_zero()) return r;
    unsigned k = a.f_->k();
    std::uint32_t p = a.f_->p();
    r.c_.assign(a.c_.size() + b.c_.size() - k, 0);
    if (k == 1) {
        for (std::size_t i = 0; i < a.count(); ++i)
            if (a.c_[i])
                kernels::mod_axpy(r.c_.data() + i, b.c_.data(), a.c_[i],
                                  b.count(), p);
    } else {
        std::vector<std::uint32_t> t(k);
        for (std::size_t i = 0; i < a.count(); ++i) {
            const std::uint32_t* ai = a.c_.data() + i * k;
            if (a.f_->s_is_zero(ai)) continue;
            for (std::size_t j = 0; j < b.count(); ++j) {
                a.f_->s_mul(ai, b.c_.data() + j * k, t.data());
                a.f_->s_add(r.c_.data() + (i + j) * k, t.data(),
                            r.c_.data() + (i + j) * k);
            }
        }
    }
    r.trim();
    return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.f_->same(*b.f_) && a.c_ == b.c_;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& f,
                                                     const Polynomial& g) {
    need_same_field(f, g);
    if (g.is_zero()) throw DivisionByZero();
    Polynomial q(f.f_), r = f;
    int dg = g.degree();
    if (f.degree() < dg) return {q, r};
    unsigned k = f.f_->k();
    std::uint32_t p = f.f_->p();
    FieldElement linv = g.leading().inverse();
    q.c_.assign((f.degree() - dg + 1) * k, 0);
    std::vector<std::uint32_t> c(k), t(k);
    for (int i = f.degree(); i >= dg; --i) {
        const std::uint32_t* top = r.c_.data() + static_cast<std::size_t>(i) * k;
        if (static_cast<std::size_t>(i) >= r.count() || f.f_->s_is_zero(top))
            continue;
        f.f_->s_mul(top, linv.coeffs().data(), c.data());
        f.f_->s_copy(c.data(), q.c_.data() + static_cast<std::size_t>(i - dg) * k);
        // r -= c * g * x^(i-dg)
        if (k == 1) {
            std::uint32_t negc = (p - c[0]) % p;
            kernels::mod_axpy(r.c_.data() + (i - dg), g.c_.data(), negc,
                              g.count(), p);
        } else {
            for (std::size_t j = 0; j < g.count(); ++j) {
                f.f_->s_mul(c.data(), g.c_.data() + j * k, t.data());
                std::uint32_t* dst = r.c_.data() + (i - dg + j) * k;
                f.f_->s_sub(dst, t.data(), dst);
            }
        }
    }
    q.trim();
    r.trim();
    return {q, r};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    need_same_field(a, b);
    if (a.is_zero() && b.is_zero()) throw BothZero();
    Polynomial x = a, y = b;
    while (!y.is_zero()) {
        Polynomial r = x % y;
        x = y;
        y = r;
    }
    return x.monic();
}

Polynomial exact_div(const Polynomial& f, const Polynomial& g) {
    auto [q, r] = Polynomial::divmod(f, g);
    if (!r.is_zero()) throw Error("division is not exact");
    return q;
}

bool is_separable(const Polynomial& f) {
    if (f.is_zero()) throw ZeroInput("separability of the zero polynomial");
    Polynomial d = f.derivative();
    if (d.is_zero()) return f.is_constant();
    return gcd(f, d).is_constant();
}

std::optional<Polynomial> sqrt_poly(const Polynomial& f) {
    const FieldRef& fld = f.field();
    if (f.is_zero()) return Polynomial::zero(fld);
    int d = f.degree();
    if (d % 2) return std::nullopt;
    int h = d / 2;
    std::vector<FieldElement> g(static_cast<std::size_t>(h) + 1, fld->zero());
    if (fld->p() == 2) {
        for (int i = 0; i <= d; ++i) {
            if (i % 2) {
                if (!f.coeff(i).is_zero()) return std::nullopt;
            } else {
                g[i / 2] = frobenius_root(f.coeff(i)); // unique square root
            }
        }
    } else {
        auto s = sqrt_elem(f.coeff(d));
        if (!s) return std::nullopt;
        g[h] = *s;
        FieldElement inv2g = (fld->from_int(2) * g[h]).inverse();
        for (int i = h - 1; i >= 0; --i) {
            // match the coefficient of x^(h+i) in g*g
            FieldElement acc = f.coeff(h + i);
            for (int j = i + 1; j <= h - 1; ++j) {
                int other = h + i - j;
                if (other > h || other < 0) continue;
                acc = acc - g[j] * g[other];
            }
            g[i] = acc * inv2g;
        }
    }
    Polynomial cand = Polynomial::from_coeffs(fld, g);
    if (cand * cand != f) return std::nullopt;
    return cand;
}

namespace {

// f with f' = 0 is u(x)^p; recover u through coefficient p-th roots.
Polynomial pth_root(const Polynomial& f) {
    const FieldRef& fld = f.field();
    std::uint32_t p = fld->p();
    std::vector<FieldElement> u;
    for (int i = 0; i <= f.degree(); ++i) {
        if (i % p) {
            if (!f.coeff(i).is_zero())
                throw Error("polynomial is not a p-th power");
        } else {
            u.push_back(frobenius_root(f.coeff(i)));
        }
    }
    return Polynomial::from_coeffs(fld, u);
}

} // namespace

Polynomial radical(const Polynomial& f) {
    if (f.is_zero()) throw ZeroInput("radical of the zero polynomial");
    Polynomial g = f.monic();
    if (g.is_constant()) return Polynomial::one(f.field());
    Polynomial d = g.derivative();
    if (d.is_zero()) return radical(pth_root(g));
    Polynomial w = exact_div(g, gcd(g, d));
    // strip every prime of w from g; what is left has p-divisible multiplicities
    Polynomial v = g;
    for (;;) {
        Polynomial h = gcd(v, w);
        if (h.is_constant()) break;
        v = exact_div(v, h);
    }
    if (v.is_constant()) return w;
    return w * radical(pth_root(v));
}

Polynomial powmod(const Polynomial& base, std::uint64_t e, const Polynomial& m) {
    Polynomial acc = Polynomial::one(base.field());
    Polynomial b = base % m;
    while (e) {
        if (e & 1) acc = acc * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return acc;
}

std::string to_text(const Polynomial& f) {
    if (f.is_zero()) return "0";
    const FieldRef& fld = f.field();
    std::string s;
    bool first = true;
    for (int i = f.degree(); i >= 0; --i) {
        FieldElement c = f.coeff(i);
        if (c.is_zero()) continue;
        if (!first) s += "+";
        first = false;
        bool prime_sub = true;
        for (unsigned j = 1; j < fld->k(); ++j)
            if (c.coeffs()[j]) { prime_sub = false; break; }
        if (i == 0) {
            s += prime_sub ? std::to_string(c.coeffs()[0]) : c.text();
            continue;
        }
        if (!c.is_one())
            s += (prime_sub ? std::to_string(c.coeffs()[0])
                            : "(" + c.text() + ")") + "*";
        s += i == 1 ? "x" : "x^" + std::to_string(i);
    }
    return s;
}

bool is_irreducible(const Polynomial& f) {
    if (f.is_constant())
        throw ConstantInput("irreducibility of a constant");
    int n = f.degree();
    if (n == 1) return true;
    const FieldRef& fld = f.field();
    std::uint64_t q = fld->q();
    // exhaustive trial division while the candidate space stays desk-sized
    if (n <= 8) {
        double space = 0, qq = 1;
        for (int d = 1; d <= n / 2; ++d) { qq *= static_cast<double>(q); space += qq; }
        if (space <= static_cast<double>(FieldSpec::kDeskScaleCap)) {
            for (int d = 1; d <= n / 2; ++d) {
                std::uint64_t cnt = 1;
                for (int i = 0; i < d; ++i) cnt *= q;
                for (std::uint64_t idx = 0; idx < cnt; ++idx) {
                    std::vector<FieldElement> cs;
                    std::uint64_t v = idx;
                    for (int i = 0; i < d; ++i) {
                        cs.push_back(fld->from_index(v % q));
                        v /= q;
                    }
                    cs.push_back(fld->one());
                    Polynomial cand = Polynomial::from_coeffs(fld, cs);
                    if ((f % cand).is_zero()) return false;
                }
            }
            return true;
        }
    }
    // Frobenius-power test: x^(q^n) = x mod f and, for each prime r | n,
    // gcd(x^(q^(n/r)) - x, f) constant.
    Polynomial x = Polynomial::x(fld);
    auto frob_pow = [&](int rounds) {
        Polynomial h = x % f;
        for (int i = 0; i < rounds; ++i) h = powmod(h, q, f);
        return h;
    };
    if (frob_pow(n) != x % f) return false;
    for (int r = 2; r <= n; ++r) {
        if (n % r) continue;
        bool rp = true;
        for (int d2 = 2; d2 * d2 <= r; ++d2)
            if (r % d2 == 0) { rp = false; break; }
        if (!rp) continue;
        Polynomial g = frob_pow(n / r) - x;
        if (g.is_zero() || !gcd(f, g).is_constant()) return false;
    }
    return true;
}

} // namespace unitsum
