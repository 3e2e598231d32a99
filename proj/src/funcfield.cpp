#include "unitsum/funcfield.hpp"

#include <algorithm>

namespace unitsum {

// ---- RationalFunction ----

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (!num_.field()->same(*den_.field())) throw MixedFields();
    if (den_.is_zero()) throw DivisionByZero();
    if (num_.is_zero()) {
        den_ = Polynomial::one(num_.field());
        return;
    }
    Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
    }
    FieldElement l = den_.leading();
    if (!l.is_one()) {
        FieldElement inv = l.inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RationalFunction RationalFunction::from_poly(Polynomial f) {
    FieldRef fld = f.field();
    return RationalFunction(std::move(f), Polynomial::one(fld));
}

RationalFunction RationalFunction::zero(const FieldRef& f) {
    return from_poly(Polynomial::zero(f));
}

RationalFunction RationalFunction::one(const FieldRef& f) {
    return from_poly(Polynomial::one(f));
}

RationalFunction RationalFunction::constant(const FieldElement& c) {
    return from_poly(Polynomial::constant(c));
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DivisionByZero();
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
}

// ---- Place ----

Place Place::infinite(FieldRef f) {
    if (!f) throw Error("null field");
    return Place(std::move(f), std::nullopt);
}

Place Place::finite(Polynomial prime) {
    FieldRef f = prime.field();
    if (prime.degree() < 1)
        throw Error("a finite place needs a nonconstant prime");
    if (!prime.is_monic())
        throw Error("a finite place needs a monic prime");
    if (!is_irreducible(prime))
        throw Error("a finite place needs an irreducible prime");
    return Place(std::move(f), std::move(prime));
}

const Polynomial& Place::prime() const {
    if (!prime_) throw Error("the infinite place has no prime polynomial");
    return *prime_;
}

FieldElement Place::point() const {
    if (!prime_ || prime_->degree() != 1)
        throw Error("point() needs a finite degree-one place");
    return -prime_->coeff(0);
}

bool operator<(const Place& a, const Place& b) {
    return a.text() < b.text();
}

bool operator==(const Place& a, const Place& b) {
    if (a.is_infinite() != b.is_infinite()) return false;
    if (!a.f_->same(*b.f_)) return false;
    return a.is_infinite() || *a.prime_ == *b.prime_;
}

// ---- Divisor ----

void Divisor::add(const Place& p, long long mult) {
    if (!mult) return;
    auto it = m_.find(p);
    if (it == m_.end()) {
        m_.emplace(p, mult);
    } else {
        it->second += mult;
        if (it->second == 0) m_.erase(it);
    }
}

long long Divisor::multiplicity(const Place& p) const {
    auto it = m_.find(p);
    return it == m_.end() ? 0 : it->second;
}

long long Divisor::degree() const {
    long long d = 0;
    for (const auto& [p, m] : m_) d += m * p.degree();
    return d;
}

std::string Divisor::text() const {
    if (m_.empty()) return "0";
    // finite places first (map order), infinite place last
    std::vector<const std::pair<const Place, long long>*> order;
    const std::pair<const Place, long long>* inf = nullptr;
    for (const auto& e : m_) {
        if (e.first.is_infinite()) inf = &e;
        else order.push_back(&e);
    }
    if (inf) order.push_back(inf);
    std::string s;
    bool first = true;
    for (auto* e : order) {
        long long m = e->second;
        if (first) {
            s += (m < 0 ? "-" : "");
            first = false;
        } else {
            s += m < 0 ? " - " : " + ";
        }
        s += std::to_string(m < 0 ? -m : m) + "*(" + e->first.text() + ")";
    }
    return s;
}

Divisor operator+(const Divisor& a, const Divisor& b) {
    Divisor r = a;
    for (const auto& [p, m] : b.m_) r.add(p, m);
    return r;
}

Divisor operator-(const Divisor& a, const Divisor& b) {
    Divisor r = a;
    for (const auto& [p, m] : b.m_) r.add(p, -m);
    return r;
}

// ---- valuation / height / divisors / factor ----

namespace {
// multiplicity of the monic irreducible p in f (f nonzero)
long long mult_in(Polynomial f, const Polynomial& p) {
    long long m = 0;
    for (;;) {
        auto [q, r] = Polynomial::divmod(f, p);
        if (!r.is_zero()) return m;
        ++m;
        f = q;
    }
}
} // namespace

Valuation valuation(const RationalFunction& f, const Place& p) {
    if (!f.field()->same(*p.field())) throw MixedFields();
    if (f.is_zero()) return {true, 0};
    if (p.is_infinite())
        return {false, static_cast<long long>(f.den().degree() - f.num().degree())};
    return {false, mult_in(f.num(), p.prime()) - mult_in(f.den(), p.prime())};
}

long long height(const RationalFunction& f) {
    if (f.is_zero()) throw ZeroInput("height of the zero function");
    long long dn = f.num().degree(), dd = f.den().degree();
    // degree of the zero divisor and of the pole divisor; they must agree
    long long zero_side = dn + std::max(0ll, dd - dn);
    long long pole_side = dd + std::max(0ll, dn - dd);
    if (zero_side != pole_side)
        throw Error("height bookkeeping mismatch");
    return zero_side;
}

std::vector<std::pair<Polynomial, int>> factor(const Polynomial& f) {
    if (f.is_zero()) throw ZeroInput("factorization of the zero polynomial");
    const FieldRef& fld = f.field();
    std::vector<std::pair<Polynomial, int>> out;
    if (f.is_constant()) return out;
    Polynomial work = f.monic();
    // linear factors through root enumeration
    if (fld->q() > FieldSpec::kDeskScaleCap)
        throw FieldTooLarge("factorization needs enumeration; field above desk cap");
    for (std::uint64_t i = 0; i < fld->q() && work.degree() >= 1; ++i) {
        FieldElement alpha = fld->from_index(i);
        if (!work.eval(alpha).is_zero()) continue;
        Polynomial lin = Polynomial::x(fld) - Polynomial::constant(alpha);
        int m = 0;
        for (;;) {
            auto [q, r] = Polynomial::divmod(work, lin);
            if (!r.is_zero()) break;
            work = q;
            ++m;
        }
        out.emplace_back(lin, m);
    }
    // higher-degree factors by exhaustive trial division; every divisor found
    // here is irreducible because all smaller factors are gone
    for (int d = 2; 2 * d <= work.degree(); ++d) {
        if (is_irreducible(work)) break;
        double space = 1;
        for (int i = 0; i < d; ++i) space *= static_cast<double>(fld->q());
        if (space > static_cast<double>(FieldSpec::kDeskScaleCap))
            throw FieldTooLarge("factorization candidate space above desk cap");
        std::uint64_t cnt = 1;
        for (int i = 0; i < d; ++i) cnt *= fld->q();
        for (std::uint64_t idx = 0; idx < cnt && 2 * d <= work.degree(); ++idx) {
            std::vector<FieldElement> cs;
            std::uint64_t v = idx;
            for (int i = 0; i < d; ++i) {
                cs.push_back(fld->from_index(v % fld->q()));
                v /= fld->q();
            }
            cs.push_back(fld->one());
            Polynomial cand = Polynomial::from_coeffs(fld, cs);
            int m = 0;
            for (;;) {
                auto [q, r] = Polynomial::divmod(work, cand);
                if (!r.is_zero()) break;
                work = q;
                ++m;
            }
            if (m) out.emplace_back(cand, m);
        }
    }
    if (work.degree() >= 1) out.emplace_back(work, 1);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree())
            return a.first.degree() < b.first.degree();
        return to_text(a.first) < to_text(b.first);
    });
    return out;
}

Divisors divisors(const RationalFunction& f) {
    if (f.is_zero()) throw ZeroInput("divisors of the zero function");
    Divisors d;
    for (const auto& [p, m] : factor(f.num()))
        d.zeros.add(Place::finite(p), m);
    for (const auto& [p, m] : factor(f.den()))
        d.poles.add(Place::finite(p), m);
    long long v_inf = f.den().degree() - f.num().degree();
    if (v_inf > 0) d.zeros.add(Place::infinite(f.field()), v_inf);
    if (v_inf < 0) d.poles.add(Place::infinite(f.field()), -v_inf);
    return d;
}

// ---- Mobius ----

Mobius::Mobius(FieldElement a_, FieldElement b_, FieldElement c_, FieldElement d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (!a.valid() || !b.valid() || !c.valid() || !d.valid())
        throw Error("uninitialized mobius entry");
    const FieldRef& f = a.field();
    if (!b.field()->same(*f) || !c.field()->same(*f) || !d.field()->same(*f))
        throw MixedFields();
    if ((a * d - b * c).is_zero()) throw SingularMatrix();
}

Mobius Mobius::identity(const FieldRef& f) {
    return Mobius(f->one(), f->zero(), f->zero(), f->one());
}

Mobius Mobius::inverse() const {
    return Mobius(d, -b, -c, a);
}

Mobius operator*(const Mobius& m, const Mobius& n) {
    return Mobius(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                  m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d);
}

RationalFunction mobius_substitute(const RationalFunction& f, const Mobius& m) {
    const FieldRef& fld = f.field();
    if (!fld->same(*m.a.field())) throw MixedFields();
    Polynomial A = Polynomial::from_coeffs(fld, {m.b, m.a}); // a*x + b
    Polynomial D = Polynomial::from_coeffs(fld, {m.d, m.c}); // c*x + d
    int N = std::max(f.num().degree(), f.den().degree());
    std::vector<Polynomial> ap, dp;
    Polynomial cur = Polynomial::one(fld);
    for (int i = 0; i <= N; ++i) { ap.push_back(cur); cur = cur * A; }
    cur = Polynomial::one(fld);
    for (int i = 0; i <= N; ++i) { dp.push_back(cur); cur = cur * D; }
    auto homog = [&](const Polynomial& g) {
        Polynomial acc(fld);
        for (int i = 0; i <= g.degree(); ++i) {
            FieldElement c = g.coeff(i);
            if (c.is_zero()) continue;
            acc = acc + (ap[i] * dp[N - i]).scaled(c);
        }
        return acc;
    };
    return RationalFunction(homog(f.num()), homog(f.den()));
}

std::optional<FieldElement> mobius_apply(const Mobius& m,
                                         const std::optional<FieldElement>& pt) {
    if (!pt) { // image of infinity
        if (m.c.is_zero()) return std::nullopt;
        return m.a / m.c;
    }
    FieldElement den = m.c * *pt + m.d;
    if (den.is_zero()) return std::nullopt;
    return (m.a * *pt + m.b) / den;
}

// ---- LaurentSeries ----

void LaurentSeries::normalize() {
    unsigned k = f_->k();
    std::size_t drop = 0;
    while (drop * k < c_.size() && f_->s_is_zero(c_.data() + drop * k)) ++drop;
    if (drop) c_.erase(c_.begin(), c_.begin() + drop * k);
}

LaurentSeries LaurentSeries::zero_to(FieldRef f, long long low) {
    if (!f) throw Error("null field");
    return LaurentSeries(std::move(f), low);
}

LaurentSeries LaurentSeries::monomial(const FieldElement& c, long long exp,
                                      long long low) {
    LaurentSeries s(c.field(), low);
    if (c.is_zero() || exp < low) return s;
    unsigned k = s.f_->k();
    s.c_.assign(static_cast<std::size_t>(exp - low + 1) * k, 0);
    s.f_->s_copy(c.coeffs().data(), s.c_.data());
    return s;
}

LaurentSeries LaurentSeries::from_poly(const Polynomial& f, long long low) {
    LaurentSeries s(f.field(), low);
    long long hi = f.degree();
    if (f.is_zero() || hi < low) return s;
    unsigned k = s.f_->k();
    s.c_.assign(static_cast<std::size_t>(hi - low + 1) * k, 0);
    for (long long e = hi; e >= std::max(0ll, low); --e)
        s.f_->s_copy(f.data() + static_cast<std::size_t>(e) * k,
                     s.c_.data() + static_cast<std::size_t>(hi - e) * k);
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::from_rational(const RationalFunction& f, long long low) {
    LaurentSeries s(f.field(), low);
    if (f.is_zero()) return s;
    if (f.is_polynomial()) return from_poly(f.num(), low);
    const FieldRef& fld = f.field();
    unsigned k = fld->k();
    long long dn = f.num().degree(), dd = f.den().degree();
    long long lead = dn - dd;
    if (lead < low) return s;
    std::size_t m = static_cast<std::size_t>(lead - low + 1);
    // reversed power-series division: coefficient i belongs to x^(lead - i)
    std::vector<std::uint32_t> q(m * k, 0), t(k);
    FieldElement d0inv = f.den().leading().inverse(); // = 1 after canonicalization
    for (std::size_t i = 0; i < m; ++i) {
        // N_i
        std::vector<std::uint32_t> acc(k, 0);
        if (dn - static_cast<long long>(i) >= 0)
            fld->s_copy(f.num().data() + (dn - i) * k, acc.data());
        for (std::size_t j = 1; j <= i; ++j) {
            long long di = dd - static_cast<long long>(j);
            if (di < 0) break;
            const std::uint32_t* Dj = f.den().data() + di * k;
            if (fld->s_is_zero(Dj)) continue;
            fld->s_mul(Dj, q.data() + (i - j) * k, t.data());
            fld->s_sub(acc.data(), t.data(), acc.data());
        }
        fld->s_mul(acc.data(), d0inv.coeffs().data(), q.data() + i * k);
    }
    s.c_ = std::move(q);
    s.normalize();
    return s;
}

long long LaurentSeries::lead_exp() const {
    if (c_.empty())
        throw PrecisionExhausted("series is zero to the tracked precision");
    return hi_exp();
}

FieldElement LaurentSeries::lead_coeff() const {
    if (c_.empty())
        throw PrecisionExhausted("series is zero to the tracked precision");
    return coeff(hi_exp());
}

FieldElement LaurentSeries::coeff(long long e) const {
    if (e < low_)
        throw PrecisionExhausted("coefficient below the tracked precision");
    if (e > hi_exp()) return f_->zero();
    unsigned k = f_->k();
    std::size_t i = static_cast<std::size_t>(hi_exp() - e);
    std::vector<std::uint32_t> c(c_.begin() + i * k, c_.begin() + (i + 1) * k);
    return f_->element(std::move(c));
}

LaurentSeries LaurentSeries::truncated(long long low) const {
    if (low < low_)
        throw PrecisionExhausted("cannot refine a series past its precision");
    LaurentSeries s(f_, low);
    long long hi = hi_exp();
    if (hi < low) return s;
    unsigned k = f_->k();
    s.c_.assign(c_.begin(), c_.begin() + static_cast<std::size_t>(hi - low + 1) * k);
    s.normalize();
    return s;
}

std::string LaurentSeries::text() const {
    std::string s;
    bool first = true;
    unsigned k = f_->k();
    long long hi = hi_exp();
    for (long long e = hi; e >= low_; --e) {
        std::size_t i = static_cast<std::size_t>(hi - e);
        if (f_->s_is_zero(c_.data() + i * k)) continue;
        FieldElement c = coeff(e);
        if (!first) s += "+";
        first = false;
        bool prime_sub = true;
        for (unsigned j = 1; j < k; ++j)
            if (c.coeffs()[j]) { prime_sub = false; break; }
        if (e == 0) {
            s += prime_sub ? std::to_string(c.coeffs()[0]) : c.text();
            continue;
        }
        if (!c.is_one())
            s += (prime_sub ? std::to_string(c.coeffs()[0])
                            : "(" + c.text() + ")") + "*";
        s += e == 1 ? "x" : "x^" + std::to_string(e);
    }
    if (first) s += "0";
    s += "+O(x^" + std::to_string(low_ - 1) + ")";
    return s;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries s(f_, low_);
    s.c_.assign(c_.size(), 0);
    unsigned k = f_->k();
    for (std::size_t i = 0; i * k < c_.size(); ++i)
        f_->s_neg(c_.data() + i * k, s.c_.data() + i * k);
    return s;
}

LaurentSeries LaurentSeries::scaled(const FieldElement& c) const {
    if (!c.valid() || !c.field()->same(*f_)) throw MixedFields();
    LaurentSeries s(f_, low_);
    if (c.is_zero()) return s;
    unsigned k = f_->k();
    s.c_.assign(c_.size(), 0);
    for (std::size_t i = 0; i * k < c_.size(); ++i)
        f_->s_mul(c_.data() + i * k, c.coeffs().data(), s.c_.data() + i * k);
    s.normalize();
    return s;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    if (!a.f_->same(*b.f_)) throw MixedFields();
    long long low = std::max(a.low_, b.low_);
    long long hi = std::max(a.hi_exp(), b.hi_exp());
    LaurentSeries s(a.f_, low);
    if (hi < low) return s;
    unsigned k = a.f_->k();
    s.c_.assign(static_cast<std::size_t>(hi - low + 1) * k, 0);
    auto slice = [k](const LaurentSeries& x, long long e) -> const std::uint32_t* {
        if (x.c_.empty() || e > x.hi_exp()) return nullptr;
        return x.c_.data() + static_cast<std::size_t>(x.hi_exp() - e) * k;
    };
    for (long long e = hi; e >= low; --e) {
        std::uint32_t* dst = s.c_.data() + static_cast<std::size_t>(hi - e) * k;
        if (const std::uint32_t* pa = slice(a, e)) a.f_->s_copy(pa, dst);
        if (const std::uint32_t* pb = slice(b, e)) a.f_->s_add(dst, pb, dst);
    }
    s.normalize();
    return s;
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
    return a + (-b);
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    if (!a.f_->same(*b.f_)) throw MixedFields();
    long long ha = a.hi_exp(), hb = b.hi_exp(); // low-1 when empty
    long long low = std::max(a.low_ + hb, b.low_ + ha);
    LaurentSeries s(a.f_, low);
    if (a.c_.empty() || b.c_.empty()) return s;
    long long hi = ha + hb;
    if (hi < low) return s;
    unsigned k = a.f_->k();
    s.c_.assign(static_cast<std::size_t>(hi - low + 1) * k, 0);
    std::vector<std::uint32_t> t(k);
    for (long long e = hi; e >= low; --e) {
        std::uint32_t* dst = s.c_.data() + static_cast<std::size_t>(hi - e) * k;
        long long i_min = std::max(a.low_, e - hb);
        long long i_max = std::min(ha, e - b.low_);
        for (long long i = i_min; i <= i_max; ++i) {
            const std::uint32_t* pa =
                a.c_.data() + static_cast<std::size_t>(ha - i) * k;
            const std::uint32_t* pb =
                b.c_.data() + static_cast<std::size_t>(hb - (e - i)) * k;
            if (a.f_->s_is_zero(pa) || a.f_->s_is_zero(pb)) continue;
            a.f_->s_mul(pa, pb, t.data());
            a.f_->s_add(dst, t.data(), dst);
        }
    }
    s.normalize();
    return s;
}

LaurentSeries series_at_infinity(const RationalFunction& f, int m) {
    if (m <= 0) throw Error("series term count must be positive");
    if (f.is_zero())
        return LaurentSeries::zero_to(f.field(), -static_cast<long long>(m) + 1);
    long long lead = f.num().degree() - f.den().degree();
    return LaurentSeries::from_rational(f, lead - m + 1);
}

// ---- quadratic roots at the infinite place ----

InfiniteRoots quadratic_roots_at_infinity(const Polynomial& f, int precision) {
    const FieldRef& fld = f.field();
    if (fld->p() == 2)
        throw WrongCharacteristic("Y^2 = f form needs odd characteristic");
    if (precision <= 0) throw Error("precision must be positive");
    if (f.is_zero())
        throw DegenerateEquation("Y^2 = 0 is degenerate");
    int E = f.degree();
    if (E % 2) return {{}, true}; // odd infinite valuation: ramified
    auto s = sqrt_elem(f.coeff(E));
    if (!s) return {{}, false}; // leading coefficient is a non-residue: inert
    long long h = E / 2;
    std::vector<FieldElement> y(static_cast<std::size_t>(precision), fld->zero());
    y[0] = *s;
    FieldElement inv2y0 = (fld->from_int(2) * y[0]).inverse();
    for (int j = 1; j < precision; ++j) {
        FieldElement acc = f.coeff(E - j);
        for (int i = 1; i < j; ++i) acc = acc - y[i] * y[j - i];
        y[static_cast<std::size_t>(j)] = acc * inv2y0;
    }
    long long low = h - precision + 1;
    LaurentSeries r1 = LaurentSeries::zero_to(fld, low);
    for (int j = 0; j < precision; ++j)
        r1 = r1 + LaurentSeries::monomial(y[static_cast<std::size_t>(j)], h - j, low);
    return {{r1, -r1}, false};
}

InfiniteRoots quadratic_roots_at_infinity(const Polynomial& B, const Polynomial& C,
                                          int precision) {
    const FieldRef& fld = B.field();
    if (!fld->same(*C.field())) throw MixedFields();
    if (fld->p() != 2)
        throw WrongCharacteristic("Y^2 + BY + C form needs characteristic 2");
    if (precision <= 0) throw Error("precision must be positive");
    if (B.is_zero())
        throw DegenerateEquation("B = 0: the equation is inseparable");
    long long lead_r = C.degree() - 2 * B.degree();
    long long low = std::min(0ll, lead_r) -
                    (precision + B.degree() + 8);
    RationalFunction R(C, B * B);
    LaurentSeries SR = LaurentSeries::from_rational(R, low);
    LaurentSeries w_acc = LaurentSeries::zero_to(fld, low);
    // peel even-order poles with w -> w + s*x^(e/2); an odd order is wild
    while (SR.known_nonzero() && SR.lead_exp() > 0) {
        long long e = SR.lead_exp();
        if (e % 2) return {{}, true};
        FieldElement s = frobenius_root(SR.lead_coeff());
        LaurentSeries u = LaurentSeries::monomial(s, e / 2, low);
        SR = SR - (u * u + u);
        w_acc = w_acc + u;
    }
    FieldElement c0 = fld->zero();
    if (SR.known_nonzero() && SR.lead_exp() == 0) c0 = SR.lead_coeff();
    auto a0 = artin_schreier_solve(c0);
    if (!a0) return {{}, false}; // constant obstruction: inert
    LaurentSeries T = SR - LaurentSeries::monomial(c0, 0, low);
    LaurentSeries w_tail = LaurentSeries::zero_to(fld, low);
    LaurentSeries Tk = T;
    while (Tk.known_nonzero()) {
        w_tail = w_tail + Tk;
        LaurentSeries sq = Tk * Tk;
        Tk = sq.truncated(std::max(low, sq.low()));
    }
    LaurentSeries w = w_acc + LaurentSeries::monomial(*a0, 0, low) + w_tail;
    LaurentSeries SB = LaurentSeries::from_poly(B, low);
    LaurentSeries y1 = SB * w;
    LaurentSeries y2 = y1 + SB;
    return {{y1, y2}, false};
}

} // namespace unitsum
