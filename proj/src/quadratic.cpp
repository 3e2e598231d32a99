#include "unitsum/quadratic.hpp"

#include <algorithm>

#include "unitsum/errors.hpp"

namespace unitsum {

// ---- CurveSpec ----

CurveRef CurveSpec::make_curve(Polynomial f) {
    FieldRef fld = f.field();
    std::vector<std::string> clauses;
    if (f.is_constant())
        clauses.push_back("defining polynomial f must be nonconstant");
    if (fld->p() == 2) {
        if (!f.is_constant() && sqrt_poly(f).has_value())
            clauses.push_back("f is a perfect square; y^2 = f is degenerate");
        if (!clauses.empty()) throw BadHasseShape(std::move(clauses));
        return CurveRef(new CurveSpec(CurveKind::CharTwoInseparable, fld,
                                      std::move(f), Polynomial::zero(fld)));
    }
    if (!clauses.empty()) throw BadHasseShape(std::move(clauses));
    if (!is_separable(f))
        throw NotSeparable("f has a repeated factor; y^2 = f needs gcd(f, f') = 1");
    return CurveRef(new CurveSpec(CurveKind::OddChar, fld, std::move(f),
                                  Polynomial::zero(fld)));
}

CurveRef CurveSpec::make_curve(Polynomial B, Polynomial C) {
    FieldRef fld = B.field();
    if (!fld->same(*C.field())) throw MixedFields();
    if (fld->p() != 2)
        throw WrongCharacteristic(
            "the modified form y^2 + By + C = 0 is a characteristic-2 shape");
    std::vector<std::string> clauses;
    if (B.is_zero()) {
        clauses.push_back("B must be nonzero (B = 0 is the inseparable shape)");
    } else if (!B.is_monic()) {
        clauses.push_back("B must be monic");
    }
    if (C.is_zero()) clauses.push_back("C must be nonzero");
    if (!B.is_zero() && !C.is_zero()) {
        Polynomial rad = radical(B);
        auto [cofactor, rem] = Polynomial::divmod(C, rad);
        if (!rem.is_zero()) {
            clauses.push_back("radical(B) must divide C");
        } else if (!rad.is_constant() && !gcd(cofactor, rad).is_constant()) {
            clauses.push_back(
                "every prime of B must divide C exactly once "
                "(gcd(C/radical(B), radical(B)) != 1)");
        }
        long long d = 2ll * B.degree() - C.degree();
        if (d < 0 && (-d) % 2 == 0)
            clauses.push_back(
                "deg C may exceed 2 deg B only by an odd amount "
                "(Hasse parity)");
        if (B.is_constant() && C.is_constant() &&
            artin_schreier_solve(C.coeff(0)).has_value())
            clauses.push_back(
                "y^2 + y + c with trace-zero c is reducible over K");
    }
    if (!clauses.empty()) throw BadHasseShape(std::move(clauses));
    return CurveRef(new CurveSpec(CurveKind::CharTwo, fld, std::move(B),
                                  std::move(C)));
}

const Polynomial& CurveSpec::f() const {
    if (kind_ == CurveKind::CharTwo)
        throw Error("f() is not defined on a modified-form curve");
    return p_;
}

const Polynomial& CurveSpec::B() const {
    if (kind_ != CurveKind::CharTwo)
        throw Error("B() is only defined on a modified-form curve");
    return p_;
}

const Polynomial& CurveSpec::C() const {
    if (kind_ != CurveKind::CharTwo)
        throw Error("C() is only defined on a modified-form curve");
    return q_;
}

bool CurveSpec::same(const CurveSpec& other) const {
    return kind_ == other.kind_ && field_->same(*other.field_) &&
           p_ == other.p_ && q_ == other.q_;
}

std::string CurveSpec::text() const {
    if (kind_ == CurveKind::CharTwo)
        return "y^2 + (" + to_text(p_) + ")y + (" + to_text(q_) + ") = 0";
    return "y^2 = " + to_text(p_);
}

// ---- Hasse form ----

std::pair<Polynomial, Polynomial> hasse_to_modified(const HasseForm& h) {
    if (h.g.field()->p() != 2)
        throw WrongCharacteristic("the Hasse form lives in characteristic 2");
    const FieldRef& fld = h.g.field();
    std::vector<std::string> clauses;
    if (h.g.is_zero()) clauses.push_back("numerator g must be nonzero");
    long long parity = 0;
    for (std::size_t i = 0; i < h.factors.size(); ++i) {
        const auto& [p, n] = h.factors[i];
        if (!p.field()->same(*fld)) throw MixedFields();
        if (p.degree() < 1 || !p.is_monic() || !is_irreducible(p)) {
            clauses.push_back("denominator factor " + to_text(p) +
                              " must be monic irreducible");
            continue;
        }
        if (n < 1) {
            clauses.push_back("exponent on " + to_text(p) + " must be >= 1");
            continue;
        }
        for (std::size_t j = 0; j < i; ++j)
            if (h.factors[j].first == p)
                clauses.push_back("denominator factor " + to_text(p) +
                                  " repeats");
        if (!h.g.is_zero() && !gcd(h.g, p).is_constant())
            clauses.push_back("numerator g must be coprime to " + to_text(p));
        parity += (2ll * n - 1) * p.degree();
    }
    if (!h.g.is_zero()) {
        parity -= h.g.degree();
        if (parity < 0 && (-parity) % 2 == 0)
            clauses.push_back(
                "sum (2n_i - 1) deg p_i - deg g must be nonnegative or odd");
    }
    if (!clauses.empty()) throw BadHasseShape(std::move(clauses));
    Polynomial B = Polynomial::one(fld), radB = Polynomial::one(fld);
    for (const auto& [p, n] : h.factors) {
        B = B * p.pow(n);
        radB = radB * p;
    }
    return {B, h.g * radB};
}

// ---- OrderElement ----

OrderElement::OrderElement(CurveRef curve, Polynomial a, Polynomial b)
    : curve_(std::move(curve)), a_(std::move(a)), b_(std::move(b)) {
    if (!curve_) throw Error("null curve");
    if (!a_.field()->same(*curve_->field()) ||
        !b_.field()->same(*curve_->field()))
        throw MixedFields();
}

OrderElement OrderElement::zero(const CurveRef& curve) {
    return OrderElement(curve, Polynomial::zero(curve->field()),
                        Polynomial::zero(curve->field()));
}

OrderElement OrderElement::one(const CurveRef& curve) {
    return OrderElement(curve, Polynomial::one(curve->field()),
                        Polynomial::zero(curve->field()));
}

OrderElement OrderElement::from_poly(const CurveRef& curve, Polynomial a) {
    return OrderElement(curve, std::move(a), Polynomial::zero(curve->field()));
}

OrderElement OrderElement::y(const CurveRef& curve) {
    return OrderElement(curve, Polynomial::zero(curve->field()),
                        Polynomial::one(curve->field()));
}

std::string OrderElement::text() const {
    return "(" + to_text(a_) + ") + (" + to_text(b_) + ")y";
}

OrderElement OrderElement::operator-() const {
    return OrderElement(curve_, -a_, -b_);
}

OrderElement operator+(const OrderElement& u, const OrderElement& v) {
    if (!u.curve_->same(*v.curve_)) throw MixedCurves();
    return OrderElement(u.curve_, u.a_ + v.a_, u.b_ + v.b_);
}

OrderElement operator-(const OrderElement& u, const OrderElement& v) {
    if (!u.curve_->same(*v.curve_)) throw MixedCurves();
    return OrderElement(u.curve_, u.a_ - v.a_, u.b_ - v.b_);
}

OrderElement operator*(const OrderElement& u, const OrderElement& v) {
    return mul(u, v);
}

bool operator==(const OrderElement& u, const OrderElement& v) {
    if (!u.curve_->same(*v.curve_)) throw MixedCurves();
    return u.a_ == v.a_ && u.b_ == v.b_;
}

OrderElement mul(const OrderElement& u, const OrderElement& v) {
    if (!u.curve()->same(*v.curve())) throw MixedCurves();
    const CurveRef& cur = u.curve();
    const Polynomial &a = u.a(), &b = u.b(), &c = v.a(), &d = v.b();
    if (cur->kind() == CurveKind::CharTwo) {
        // y^2 = By + C on this curve (char 2 signs)
        return OrderElement(cur, a * c + b * d * cur->C(),
                            a * d + b * c + b * d * cur->B());
    }
    // y^2 = f
    return OrderElement(cur, a * c + b * d * cur->f(), a * d + b * c);
}

OrderElement conj(const OrderElement& u) {
    const CurveRef& cur = u.curve();
    if (cur->kind() == CurveKind::CharTwo)
        return OrderElement(cur, u.a() + u.b() * cur->B(), u.b());
    return OrderElement(cur, u.a(), -u.b());
}

Polynomial norm(const OrderElement& u) {
    const CurveRef& cur = u.curve();
    const Polynomial &a = u.a(), &b = u.b();
    if (cur->kind() == CurveKind::CharTwo)
        return a * a + a * b * cur->B() + b * b * cur->C();
    return a * a - b * b * cur->f();
}

bool is_unit(const OrderElement& u) {
    if (u.is_zero()) throw ZeroElement("the zero element is not testable");
    Polynomial n = norm(u);
    return n.is_constant() && !n.is_zero();
}

// ---- fundamental unit ----

namespace {

// canonical order on same-field polynomials: degree, then coefficient index
// from the top down
bool poly_less(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        std::uint64_t ia = a.coeff(i).index(), ib = b.coeff(i).index();
        if (ia != ib) return ia < ib;
    }
    return false;
}

// a^2 + B a = rhs with deg a <= deg B, as a GF(2)-linear system over the
// coefficient bits.  Returns the canonical lesser of the two solutions
// {a, a + B} or nothing.
std::optional<Polynomial> solve_artin_schreier_poly(const Polynomial& B,
                                                    const Polynomial& rhs) {
    const FieldRef& fld = B.field();
    unsigned k = fld->k();
    int db = B.degree();
    std::size_t cols = static_cast<std::size_t>(db + 1) * k;
    std::size_t rows = static_cast<std::size_t>(2 * db + 1) * k;
    if (rhs.degree() > 2 * db) return std::nullopt;
    // column c = bit pattern of (x^i t^j)^2 + B x^i t^j with c = i*k + j
    std::vector<std::vector<std::uint8_t>> M(rows,
                                             std::vector<std::uint8_t>(cols, 0));
    std::vector<std::uint8_t> v(rows, 0);
    for (int i = 0; i <= db; ++i) {
        for (unsigned j = 0; j < k; ++j) {
            std::vector<std::uint32_t> cj(k, 0);
            cj[j] = 1;
            Polynomial basis = Polynomial::monomial(fld->element(std::move(cj)), i);
            Polynomial img = basis * basis + B * basis;
            for (int r = 0; r <= img.degree(); ++r) {
                FieldElement cr = img.coeff(r);
                for (unsigned jj = 0; jj < k; ++jj)
                    M[static_cast<std::size_t>(r) * k + jj]
                     [static_cast<std::size_t>(i) * k + j] =
                        static_cast<std::uint8_t>(cr.coeffs()[jj] & 1);
            }
        }
    }
    for (int r = 0; r <= rhs.degree(); ++r) {
        FieldElement cr = rhs.coeff(r);
        for (unsigned jj = 0; jj < k; ++jj)
            v[static_cast<std::size_t>(r) * k + jj] =
                static_cast<std::uint8_t>(cr.coeffs()[jj] & 1);
    }
    // Gaussian elimination over GF(2)
    std::vector<std::size_t> pivot_col(rows, SIZE_MAX);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t sel = SIZE_MAX;
        for (std::size_t r = rank; r < rows; ++r)
            if (M[r][c]) { sel = r; break; }
        if (sel == SIZE_MAX) continue;
        std::swap(M[sel], M[rank]);
        std::swap(v[sel], v[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || !M[r][c]) continue;
            for (std::size_t cc = c; cc < cols; ++cc) M[r][cc] ^= M[rank][cc];
            v[r] ^= v[rank];
        }
        pivot_col[rank] = c;
        ++rank;
    }
    for (std::size_t r = rank; r < rows; ++r)
        if (v[r]) return std::nullopt; // inconsistent
    std::vector<std::uint32_t> bits(cols, 0);
    for (std::size_t r = 0; r < rank; ++r) bits[pivot_col[r]] = v[r];
    std::vector<FieldElement> cs;
    for (int i = 0; i <= db; ++i) {
        std::vector<std::uint32_t> cj(k, 0);
        for (unsigned j = 0; j < k; ++j)
            cj[j] = bits[static_cast<std::size_t>(i) * k + j];
        cs.push_back(fld->element(std::move(cj)));
    }
    Polynomial a = Polynomial::from_coeffs(fld, cs);
    Polynomial alt = a + B; // the kernel of a -> a^2 + Ba is exactly {0, B}
    return poly_less(alt, a) ? alt : a;
}

} // namespace

std::optional<std::pair<OrderElement, FieldElement>>
fundamental_unit(const CurveRef& curve) {
    if (!curve) throw Error("null curve");
    const FieldRef& fld = curve->field();
    if (curve->kind() == CurveKind::CharTwoInseparable)
        throw InseparableCurve(
            "a purely inseparable extension has no fundamental unit search");
    if (fld->q() > FieldSpec::kDeskScaleCap)
        throw FieldTooLarge("mu sweep needs an enumerable constant field");
    if (curve->kind() == CurveKind::OddChar) {
        const Polynomial& f = curve->f();
        for (std::uint64_t i = 1; i < fld->q(); ++i) {
            FieldElement mu = fld->from_index(i);
            auto g = sqrt_poly(f + Polynomial::constant(mu));
            if (!g) continue;
            OrderElement eps(curve, *g, Polynomial::one(fld));
            return std::make_pair(eps, mu);
        }
        return std::nullopt;
    }
    const Polynomial &B = curve->B(), &C = curve->C();
    for (std::uint64_t i = 1; i < fld->q(); ++i) {
        FieldElement mu = fld->from_index(i);
        auto a = solve_artin_schreier_poly(B, C + Polynomial::constant(mu));
        if (!a) continue;
        OrderElement eps(curve, *a, Polynomial::one(fld));
        return std::make_pair(eps, mu);
    }
    return std::nullopt;
}

std::pair<Polynomial, Polynomial> unit_powers(const OrderElement& eps, int n) {
    if (n < 0) throw Error("power index must be nonnegative");
    if (!eps.b().is_one())
        throw WrongShape("unit-power recursions need the shape a(x) + y");
    if (!is_unit(eps))
        throw NotUnit("norm of " + eps.text() + " is not a nonzero constant");
    const CurveRef& cur = eps.curve();
    const FieldRef& fld = cur->field();
    const Polynomial& a = eps.a();
    Polynomial an = Polynomial::one(fld), bn = Polynomial::zero(fld);
    const bool char2 = cur->kind() == CurveKind::CharTwo;
    for (int i = 0; i < n; ++i) {
        Polynomial an1 = char2 ? a * an + bn * cur->C() : a * an + bn * cur->f();
        Polynomial bn1 = char2 ? a * bn + an + bn * cur->B() : a * bn + an;
        an = std::move(an1);
        bn = std::move(bn1);
    }
    return {an, bn};
}

// ---- genus and splitting ----

std::string splitting_text(Splitting s) {
    switch (s) {
        case Splitting::Split: return "split";
        case Splitting::Inert: return "inert";
        case Splitting::Ramified: return "ramified";
        case Splitting::NotApplicable: return "not-applicable";
    }
    return "not-applicable";
}

GenusSplitting genus_and_splitting(const CurveRef& curve) {
    if (!curve) throw Error("null curve");
    GenusSplitting out;
    if (curve->kind() != CurveKind::CharTwo) {
        const Polynomial& f = curve->f();
        int e = f.degree();
        out.genus = (e - 1) / 2;
        out.genus_zero = (e == 1 || e == 2);
        if (curve->kind() == CurveKind::CharTwoInseparable) {
            out.inseparable = true;
            out.splitting = Splitting::Ramified; // purely inseparable place
            return out;
        }
        if (e % 2) {
            out.splitting = Splitting::Ramified;
        } else {
            out.splitting = sqrt_elem(f.leading()) ? Splitting::Split
                                                   : Splitting::Inert;
        }
        return out;
    }
    const Polynomial &B = curve->B(), &C = curve->C();
    if (B.is_constant()) {
        // Eq.-(3) shape y^2 + y = C: Artin-Schreier genus
        out.genus = C.is_constant() ? 0 : (C.degree() - 1) / 2;
    } else {
        out.genus = B.degree() - 1;
    }
    out.genus_zero = (out.genus == 0);
    int prec = 2 * std::max({B.degree(), C.degree(), 1}) + 8;
    InfiniteRoots roots = quadratic_roots_at_infinity(B, C, prec);
    out.splitting = roots.ramified ? Splitting::Ramified
                    : roots.roots.empty() ? Splitting::Inert
                                          : Splitting::Split;
    // closed-form cross-check in the LeBrigand genus-0 shape
    if (B.degree() == 1 && C.degree() <= 2) {
        bool closed_split =
            C.degree() < 2 ||
            artin_schreier_solve(C.leading()).has_value();
        if (closed_split != (out.splitting == Splitting::Split))
            throw Error("series splitting disagrees with the closed form");
    }
    if (C.degree() > 2 * B.degree() && out.splitting != Splitting::Ramified)
        throw Error("odd-deficit form must ramify");
    return out;
}

ClassificationReport classify(const CurveRef& curve) {
    if (!curve) throw Error("null curve");
    ClassificationReport rep;
    GenusSplitting gs = genus_and_splitting(curve);
    rep.genus_zero = gs.genus_zero;
    rep.splitting = gs.splitting;
    switch (curve->kind()) {
        case CurveKind::OddChar:
            rep.full_constant_field = true; // separable nonconstant f
            break;
        case CurveKind::CharTwo:
            rep.full_constant_field = !curve->C().is_constant();
            break;
        case CurveKind::CharTwoInseparable:
            rep.full_constant_field = true;
            break;
    }
    bool omega = rep.full_constant_field && rep.genus_zero &&
                 rep.splitting == Splitting::Split;
    rep.verdict = omega ? ClassificationReport::Verdict::Omega
                        : ClassificationReport::Verdict::Infinity;
    if (omega) {
        rep.reasons = {"full-constant-field", "genus-zero",
                       "infinite-place-splits"};
        return rep;
    }
    if (gs.inseparable) rep.reasons.push_back("purely-inseparable");
    if (!rep.full_constant_field)
        rep.reasons.push_back("constant-field-extension");
    if (!rep.genus_zero) rep.reasons.push_back("genus-positive");
    if (rep.splitting == Splitting::Ramified)
        rep.reasons.push_back("infinite-place-ramified");
    else if (rep.splitting == Splitting::Inert)
        rep.reasons.push_back("infinite-place-inert");
    return rep;
}

// ---- nonsingularity ----

namespace {

// arithmetic in GF(q)[u]/(m): elements are polynomials of degree < deg m
struct RelExt {
    Polynomial m;
    Polynomial mul(const Polynomial& a, const Polynomial& b) const {
        return (a * b) % m;
    }
    Polynomial eval(const Polynomial& g, const Polynomial& at) const {
        Polynomial r = Polynomial::zero(m.field());
        for (int i = g.degree(); i >= 0; --i)
            r = mul(r, at) + Polynomial::constant(g.coeff(i));
        return r;
    }
};

Polynomial first_irreducible(const FieldRef& fld, int d) {
    std::uint64_t span = 1;
    for (int i = 0; i < d; ++i) span *= fld->q();
    for (std::uint64_t idx = 0; idx < span; ++idx) {
        std::vector<FieldElement> cs;
        std::uint64_t v = idx;
        for (int i = 0; i < d; ++i) {
            cs.push_back(fld->from_index(v % fld->q()));
            v /= fld->q();
        }
        cs.push_back(fld->one());
        Polynomial cand = Polynomial::from_coeffs(fld, cs);
        if (d == 1 || is_irreducible(cand)) return cand;
    }
    throw Error("no irreducible modulus of the requested degree"); // unreachable
}

} // namespace

bool check_nonsingular(const Polynomial& B, const Polynomial& C,
                       const std::vector<int>& D) {
    const FieldRef& fld = B.field();
    if (!fld->same(*C.field())) throw MixedFields();
    if (fld->p() != 2)
        throw WrongCharacteristic("smoothness check targets the char-2 form");
    Polynomial Bd = B.derivative(), Cd = C.derivative();
    for (int d : D) {
        if (d < 1) throw Error("extension degree must be positive");
        double pts = 1;
        for (int i = 0; i < d; ++i) pts *= static_cast<double>(fld->q());
        if (pts > (1 << 14))
            throw FieldTooLarge("point enumeration above desk cap");
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= fld->q();
        RelExt E{first_irreducible(fld, d)};
        for (std::uint64_t ia = 0; ia < count; ++ia) {
            std::vector<FieldElement> cs;
            std::uint64_t v = ia;
            for (int i = 0; i < d; ++i) {
                cs.push_back(fld->from_index(v % fld->q()));
                v /= fld->q();
            }
            Polynomial alpha = Polynomial::from_coeffs(fld, cs);
            Polynomial Ba = E.eval(B, alpha);
            if (!Ba.is_zero()) continue; // G_Y = B(alpha) already nonzero
            Polynomial Ca = E.eval(C, alpha);
            Polynomial Bda = E.eval(Bd, alpha);
            Polynomial Cda = E.eval(Cd, alpha);
            for (std::uint64_t ib = 0; ib < count; ++ib) {
                std::vector<FieldElement> ds;
                std::uint64_t w = ib;
                for (int i = 0; i < d; ++i) {
                    ds.push_back(fld->from_index(w % fld->q()));
                    w /= fld->q();
                }
                Polynomial beta = Polynomial::from_coeffs(fld, ds);
                Polynomial G = E.mul(beta, beta) + E.mul(Ba, beta) + Ca;
                if (!G.is_zero()) continue;
                Polynomial Gx = E.mul(Bda, beta) + Cda;
                if (Gx.is_zero()) return false; // common zero of G, G_X, G_Y
            }
        }
    }
    return true;
}

bool check_nonsingular(const CurveRef& curve, const std::vector<int>& D) {
    if (!curve) throw Error("null curve");
    if (curve->kind() != CurveKind::CharTwo)
        throw Error("smoothness check applies to the modified char-2 form");
    return check_nonsingular(curve->B(), curve->C(), D);
}

} // namespace unitsum
