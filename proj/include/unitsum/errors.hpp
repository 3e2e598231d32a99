#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace unitsum {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operands belong to different field constructions.
struct MixedFields : Error {
    MixedFields() : Error("operands belong to different fields") {}
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

struct WrongCharacteristic : Error {
    explicit WrongCharacteristic(const std::string& what) : Error(what) {}
};

struct FieldTooLarge : Error {
    explicit FieldTooLarge(const std::string& what) : Error(what) {}
};

struct BothZero : Error {
    BothZero() : Error("gcd(0, 0) is undefined") {}
};

struct ConstantInput : Error {
    explicit ConstantInput(const std::string& what) : Error(what) {}
};

struct ZeroInput : Error {
    explicit ZeroInput(const std::string& what) : Error(what) {}
};

struct ZeroElement : Error {
    explicit ZeroElement(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
    SingularMatrix() : Error("mobius matrix has zero determinant") {}
};

struct DegenerateEquation : Error {
    explicit DegenerateEquation(const std::string& what) : Error(what) {}
};

struct NotSeparable : Error {
    explicit NotSeparable(const std::string& what) : Error(what) {}
};

// Carries every violated normal-form clause, not just the first one.
struct BadHasseShape : Error {
    explicit BadHasseShape(std::vector<std::string> clauses_)
        : Error(join(clauses_)), clauses(std::move(clauses_)) {}
    std::vector<std::string> clauses;

private:
    static std::string join(const std::vector<std::string>& cs) {
        std::string s = "bad Hasse shape:";
        for (const auto& c : cs) { s += " ["; s += c; s += "]"; }
        return s;
    }
};

struct MixedCurves : Error {
    MixedCurves() : Error("operands belong to different curves") {}
};

struct InseparableCurve : Error {
    explicit InseparableCurve(const std::string& what) : Error(what) {}
};

struct NotUnit : Error {
    explicit NotUnit(const std::string& what) : Error(what) {}
};

struct WrongShape : Error {
    explicit WrongShape(const std::string& what) : Error(what) {}
};

struct NotOmega : Error {
    explicit NotOmega(const std::string& what) : Error(what) {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

struct NotAnSInteger : Error {
    explicit NotAnSInteger(const std::string& what) : Error(what) {}
};

struct BadPlaceSet : Error {
    explicit BadPlaceSet(const std::string& what) : Error(what) {}
};

struct NoFundamentalUnit : Error {
    explicit NoFundamentalUnit(const std::string& what) : Error(what) {}
};

struct NoneFound : Error {
    explicit NoneFound(const std::string& what) : Error(what) {}
};

// Search gave up before exhausting the requested bounds.
struct BudgetExceeded : Error {
    BudgetExceeded(const std::string& what, long long partial_bound_)
        : Error(what), partial_bound(partial_bound_) {}
    long long partial_bound;
};

// Text input rejected; line/column point at the offending token.
struct ParseError : Error {
    ParseError(const std::string& what, int line_, int column_)
        : Error(what + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
    int line;
    int column;
};

} // namespace unitsum
