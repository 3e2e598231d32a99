#include "unitsum/textio.hpp"

#include <cctype>

#include "unitsum/errors.hpp"

namespace unitsum {

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Cursor(const std::string& text) : s(text) {}

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }

    void advance() {
        if (pos >= s.size()) return;
        if (s[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, line, col);
    }

    bool eat(char c) {
        skip_ws();
        if (peek() != c) return false;
        advance();
        return true;
    }

    void expect(char c, const char* where) {
        if (!eat(c))
            fail(std::string("expected '") + c + "' " + where);
    }

    void expect_word(const char* w) {
        skip_ws();
        for (const char* q = w; *q; ++q) {
            if (peek() != *q) fail(std::string("expected \"") + w + "\"");
            advance();
        }
    }

    void expect_end() {
        skip_ws();
        if (peek() != '\0') fail("unexpected trailing input");
    }

    struct Mark {
        size_t pos;
        int line, col;
    };
    Mark mark() const { return {pos, line, col}; }
    void reset(Mark m) {
        pos = m.pos;
        line = m.line;
        col = m.col;
    }
};

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

unsigned long long parse_uint(Cursor& c) {
    c.skip_ws();
    if (!is_digit(c.peek())) c.fail("expected a number");
    unsigned long long v = 0;
    while (is_digit(c.peek())) {
        v = v * 10 + static_cast<unsigned long long>(c.peek() - '0');
        if (v > (1ull << 40)) c.fail("number too large");
        c.advance();
    }
    return v;
}

int parse_exponent(Cursor& c) {
    unsigned long long e = parse_uint(c);
    if (e > 4096) c.fail("exponent too large");
    return static_cast<int>(e);
}

bool is_prime_ull(unsigned long long p) {
    if (p < 2) return false;
    for (unsigned long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// t or t^e, with an optional preceding integer factor already consumed by
// the caller
FieldElement parse_t_power(Cursor& c, const FieldRef& F) {
    if (F->k() == 1) c.fail("'t' only names a generator in extension fields");
    c.advance(); // 't'
    long long e = 1;
    c.skip_ws();
    if (c.peek() == '^') {
        c.advance();
        e = parse_exponent(c);
    }
    return F->from_index(F->p()).pow(e); // generator t has index p
}

// INT ['*' t[^e]] | t[^e]
FieldElement parse_element_term(Cursor& c, const FieldRef& F) {
    c.skip_ws();
    FieldElement coef = F->one();
    bool have = false;
    if (is_digit(c.peek())) {
        coef = F->from_int(static_cast<long long>(parse_uint(c)));
        have = true;
        Cursor::Mark m = c.mark();
        if (c.eat('*')) {
            c.skip_ws();
            if (c.peek() != 't') c.reset(m);
        }
        c.skip_ws();
    }
    if (c.peek() == 't') return coef * parse_t_power(c, F);
    if (have) return coef;
    c.fail("expected a coefficient");
}

FieldElement parse_element_sum(Cursor& c, const FieldRef& F) {
    FieldElement acc = F->zero();
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
        neg = c.peek() == '-';
        c.advance();
    }
    while (true) {
        FieldElement t = parse_element_term(c, F);
        acc = neg ? acc - t : acc + t;
        c.skip_ws();
        if (c.peek() == '+')
            neg = false;
        else if (c.peek() == '-')
            neg = true;
        else
            break;
        c.advance();
    }
    return acc;
}

// [coef '*'] x ['^' e] | coef, with coef an integer, a t-power term, or a
// parenthesized t-polynomial
Polynomial parse_poly_term(Cursor& c, const FieldRef& F) {
    c.skip_ws();
    FieldElement coef = F->one();
    bool have = false;

    if (c.peek() == '(') {
        c.advance();
        coef = parse_element_sum(c, F);
        c.expect(')', "after the coefficient");
        have = true;
    } else if (is_digit(c.peek())) {
        coef = F->from_int(static_cast<long long>(parse_uint(c)));
        have = true;
    }
    {
        Cursor::Mark m = c.mark();
        if (c.eat('*')) {
            c.skip_ws();
            if (c.peek() != 't' && c.peek() != 'x') c.reset(m);
        }
    }
    c.skip_ws();
    if (c.peek() == 't') {
        FieldElement tp = parse_t_power(c, F);
        coef = have ? coef * tp : tp;
        have = true;
        Cursor::Mark m = c.mark();
        if (c.eat('*')) {
            c.skip_ws();
            if (c.peek() != 'x') c.reset(m);
        }
        c.skip_ws();
    }
    if (c.peek() == 'x') {
        c.advance();
        int e = 1;
        c.skip_ws();
        if (c.peek() == '^') {
            c.advance();
            e = parse_exponent(c);
        }
        return Polynomial::monomial(coef, e);
    }
    if (have) return Polynomial::constant(coef);
    c.fail("expected a term");
}

Polynomial parse_poly_sum(Cursor& c, const FieldRef& F) {
    Polynomial acc = Polynomial::zero(F);
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
        neg = c.peek() == '-';
        c.advance();
    }
    while (true) {
        Polynomial t = parse_poly_term(c, F);
        acc = neg ? acc - t : acc + t;
        c.skip_ws();
        if (c.peek() == '+')
            neg = false;
        else if (c.peek() == '-')
            neg = true;
        else
            break;
        c.advance();
    }
    return acc;
}

// a single term, or a parenthesized polynomial, or a parenthesized constant
// acting as a coefficient: (x^2+1), x^2, (t+1)*x^2
Polynomial parse_rational_factor(Cursor& c, const FieldRef& F) {
    c.skip_ws();
    if (c.peek() != '(') return parse_poly_term(c, F);
    c.advance();
    Polynomial inner = parse_poly_sum(c, F);
    c.expect(')', "after the group");
    Cursor::Mark m = c.mark();
    c.skip_ws();
    if (c.peek() == '*' || c.peek() == 'x') {
        if (!inner.is_constant()) {
            c.reset(m);
            return inner; // "(x+1)*..." is not a coefficient; stop here
        }
        if (c.peek() == '*') {
            c.advance();
            c.skip_ws();
        }
        if (c.peek() != 'x') c.fail("expected 'x' after the coefficient group");
        c.advance();
        int e = 1;
        c.skip_ws();
        if (c.peek() == '^') {
            c.advance();
            e = parse_exponent(c);
        }
        return Polynomial::monomial(inner.coeff(0), e);
    }
    return inner;
}

Place parse_one_place(Cursor& c, const FieldRef& F) {
    c.skip_ws();
    if (c.peek() == 'i') {
        c.expect_word("inf");
        return Place::infinite(F);
    }
    Polynomial p = parse_poly_sum(c, F);
    if (p.is_zero()) c.fail("the zero polynomial is not a place");
    if (!p.is_monic()) p = p * Polynomial::constant(p.leading().inverse());
    return Place::finite(p);
}

// a side of n/d can go bare only if it reads as one product: no '+'/'-'
// outside parentheses (extension-field coefficients keep theirs inside)
std::string wrap_side(const Polynomial& p) {
    std::string t = to_text(p);
    int depth = 0;
    for (char ch : t) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == '+' || ch == '-'))
            return "(" + t + ")";
    }
    return t;
}

} // namespace

FieldRef parse_field(const std::string& text) {
    Cursor c(text);
    c.expect_word("GF");
    c.expect('(', "after GF");
    unsigned long long q = parse_uint(c);
    unsigned long long p = q;
    unsigned k = 1;
    c.skip_ws();
    if (c.peek() == '^') {
        c.advance();
        unsigned long long e = parse_uint(c);
        if (e < 1 || e > 20) c.fail("bad extension degree");
        k = static_cast<unsigned>(e);
    } else {
        // factor q = p^k
        if (q < 2) c.fail("field size must be at least 2");
        unsigned long long d = 2;
        while (d * d <= q && q % d != 0) ++d;
        p = (d * d <= q) ? d : q;
        unsigned long long rest = q;
        k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        if (rest != 1) c.fail("field size must be a prime power");
    }
    if (!is_prime_ull(p)) c.fail("characteristic must be prime");
    c.expect(')', "after the field size");
    c.skip_ws();
    if (c.peek() == ':') {
        c.advance();
        if (k == 1) c.fail("prime fields take no modulus");
        // modulus over GF(p), ascending coefficients for the constructor
        FieldRef Fp = FieldSpec::prime(p);
        Polynomial mod = [&] {
            // reuse the x-grammar with t as the variable by temporary rename
            c.skip_ws();
            std::string rest(text.substr(c.pos));
            for (auto& ch : rest)
                if (ch == 't') ch = 'x';
            Cursor mc(rest);
            mc.line = c.line;
            mc.col = c.col;
            Polynomial m = parse_poly_sum(mc, Fp);
            mc.expect_end();
            while (c.peek() != '\0') c.advance();
            return m;
        }();
        if (mod.degree() != static_cast<int>(k))
            c.fail("modulus degree must equal the extension degree");
        std::vector<std::uint32_t> coeffs;
        for (int i = 0; i <= mod.degree(); ++i)
            coeffs.push_back(mod.coeff(i).coeffs()[0]);
        return FieldSpec::extension(p, k, std::move(coeffs));
    }
    c.expect_end();
    if (k == 1) return FieldSpec::prime(p);
    return FieldSpec::extension(p, k);
}

Polynomial parse_poly(const FieldRef& field, const std::string& text) {
    Cursor c(text);
    Polynomial p = parse_poly_sum(c, field);
    c.expect_end();
    return p;
}

RationalFunction parse_rational(const FieldRef& field,
                                const std::string& text) {
    Cursor c(text);
    RationalFunction acc = RationalFunction::zero(field);
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
        neg = c.peek() == '-';
        c.advance();
    }
    while (true) {
        Polynomial num = parse_rational_factor(c, field);
        RationalFunction term = RationalFunction::from_poly(num);
        c.skip_ws();
        if (c.peek() == '/') {
            c.advance();
            Polynomial den = parse_rational_factor(c, field);
            if (den.is_zero()) c.fail("division by the zero polynomial");
            term = RationalFunction(num, den);
        }
        acc = neg ? acc - term : acc + term;
        c.skip_ws();
        if (c.peek() == '+')
            neg = false;
        else if (c.peek() == '-')
            neg = true;
        else
            break;
        c.advance();
    }
    c.expect_end();
    return acc;
}

Place parse_place(const FieldRef& field, const std::string& text) {
    Cursor c(text);
    Place p = parse_one_place(c, field);
    c.expect_end();
    return p;
}

std::vector<Place> parse_places(const FieldRef& field,
                                const std::string& text) {
    Cursor c(text);
    std::vector<Place> out;
    while (true) {
        out.push_back(parse_one_place(c, field));
        c.skip_ws();
        if (c.peek() != ',') break;
        c.advance();
    }
    c.expect_end();
    return out;
}

CurveRef parse_curve(const FieldRef& field, const std::string& text) {
    Cursor c(text);
    c.expect_word("y");
    c.expect('^', "after y");
    c.expect('2', "in y^2");
    c.skip_ws();
    if (c.eat('=')) {
        Polynomial f = parse_poly_sum(c, field);
        c.expect_end();
        return CurveSpec::make_curve(f);
    }
    c.expect('+', "after y^2");
    c.skip_ws();
    if (c.peek() == '(') {
        c.advance();
        Polynomial B = parse_poly_sum(c, field);
        c.expect(')', "after B");
        c.skip_ws();
        if (c.peek() == '*') c.advance();
        c.expect('y', "after (B)");
        c.expect('+', "after (B)y");
        c.expect('(', "before C");
        Polynomial C = parse_poly_sum(c, field);
        c.expect(')', "after C");
        c.expect('=', "after (C)");
        c.expect('0', "on the right-hand side");
        c.expect_end();
        return CurveSpec::make_curve(B, C);
    }
    if (c.peek() == 'y') {
        c.advance();
        c.expect('=', "after y^2 + y");
        c.expect('(', "before the numerator");
        Polynomial g = parse_poly_sum(c, field);
        c.expect(')', "after the numerator");
        c.expect('/', "between numerator and denominator");
        c.expect('(', "before the denominator product");
        HasseForm h{{}, g};
        while (true) {
            c.expect('(', "before a denominator factor");
            Polynomial p = parse_poly_sum(c, field);
            c.expect(')', "after a denominator factor");
            int e = 1;
            c.skip_ws();
            if (c.peek() == '^') {
                c.advance();
                e = parse_exponent(c);
            }
            if (e % 2 == 0 || e < 1)
                c.fail("Hasse denominator exponents are the odd 2n-1");
            h.factors.emplace_back(p, (e + 1) / 2);
            c.skip_ws();
            if (c.peek() != '*') break;
            c.advance();
        }
        c.expect(')', "after the denominator product");
        c.expect_end();
        auto [B, C] = hasse_to_modified(h);
        return CurveSpec::make_curve(B, C);
    }
    c.fail("expected '(B)y' or 'y' after 'y^2 +'");
}

OrderElement parse_order_element(const CurveRef& curve,
                                 const std::string& text) {
    const FieldRef& F = curve->field();
    Cursor c(text);
    Polynomial a = Polynomial::zero(F);
    Polynomial b = Polynomial::zero(F);
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
        neg = c.peek() == '-';
        c.advance();
    }
    while (true) {
        Polynomial part = Polynomial::zero(F);
        bool is_y = false;
        c.skip_ws();
        if (c.peek() == 'y') {
            c.advance();
            part = Polynomial::one(F);
            is_y = true;
        } else if (c.peek() == '(') {
            c.advance();
            part = parse_poly_sum(c, F);
            c.expect(')', "after the group");
            c.skip_ws();
            if (c.peek() == '*') {
                c.advance();
                c.skip_ws();
            }
            if (c.peek() == 'y') {
                c.advance();
                is_y = true;
            }
        } else {
            part = parse_poly_term(c, F);
            Cursor::Mark m = c.mark();
            c.skip_ws();
            if (c.peek() == '*') {
                c.advance();
                c.skip_ws();
                if (c.peek() != 'y') c.reset(m);
            }
            if (c.peek() == 'y') {
                c.advance();
                is_y = true;
            }
        }
        Polynomial& slot = is_y ? b : a;
        slot = neg ? slot - part : slot + part;
        c.skip_ws();
        if (c.peek() == '+')
            neg = false;
        else if (c.peek() == '-')
            neg = true;
        else
            break;
        c.advance();
    }
    c.expect_end();
    return OrderElement::from_poly(curve, a) +
           OrderElement::from_poly(curve, b) * OrderElement::y(curve);
}

std::string rational_text(const RationalFunction& f) {
    if (f.den().is_one()) return to_text(f.num());
    return wrap_side(f.num()) + "/" + wrap_side(f.den());
}

std::string unit_sum_text(const std::vector<RationalFunction>& units) {
    if (units.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < units.size(); ++i) {
        if (i) out += " + ";
        out += rational_text(units[i]);
    }
    return out;
}

} // namespace unitsum
