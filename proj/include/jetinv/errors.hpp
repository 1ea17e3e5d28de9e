#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jetinv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Division by an expression that normalizes to the zero polynomial.
struct ZeroDenominator : Error {
    ZeroDenominator() : Error("division by an expression that normalizes to zero") {}
    explicit ZeroDenominator(const std::string& what) : Error(what) {}
};

/// Expansion exceeded the configured monomial-count limit.
struct ExprTooLarge : Error {
    explicit ExprTooLarge(std::size_t count, std::size_t limit)
        : Error("expression grew to " + std::to_string(count) +
                " monomials (limit " + std::to_string(limit) + ")") {}
};

/// A formal-derivative tower was stepped past its configured depth.
struct TowerExhausted : Error {
    TowerExhausted(const std::string& tower, int index, int depth)
        : Error("tower '" + tower + "' exhausted: needs index " + std::to_string(index) +
                ", max depth " + std::to_string(depth)) {}
};

struct DivisionByZeroAtPoint : Error {
    DivisionByZeroAtPoint() : Error("denominator evaluates to zero at the given point") {}
};

struct UnassignedSymbol : Error {
    explicit UnassignedSymbol(const std::string& name)
        : Error("symbol '" + name + "' has no value at the given point"), symbol(name) {}
    std::string symbol;
};

/// Expression order exceeds the prolongation order of the field being applied.
struct OrderMismatch : Error {
    OrderMismatch(int expr_order, int field_order)
        : Error("expression has jet order " + std::to_string(expr_order) +
                " but the field is prolonged only to order " + std::to_string(field_order)) {}
};

/// Point lies on one of the singular hyperplanes z=0, z_y=0, z_u=0.
struct SingularPoint : Error {
    explicit SingularPoint(const std::string& locus)
        : Error("point lies on the singular locus {" + locus + " = 0}") {}
};

/// A required derivative of the control function vanishes identically.
struct IdenticallySingular : Error {
    explicit IdenticallySingular(const std::string& denom)
        : Error("restriction is identically singular: denominator factor '" + denom +
                "' vanishes identically"),
          denominator(denom) {}
    std::string denominator;
};

struct SingularSample : Error {
    explicit SingularSample(const std::string& what) : Error(what) {}
};

/// Fewer independent invariants were generated than the expected count.
struct RankDeficiency : Error {
    RankDeficiency(int order, int found, int expected)
        : Error("only " + std::to_string(found) + " independent invariants found at order " +
                std::to_string(order) + ", expected " + std::to_string(expected)) {}
};

struct SyntaxError : Error {
    SyntaxError(const std::string& what, int line_, int column_)
        : Error(what + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
    int line;
    int column;
};

struct UnknownSymbol : Error {
    UnknownSymbol(const std::string& name, std::vector<std::string> valid, int column_)
        : Error(make_message(name, valid, column_)),
          symbol(name), valid_names(std::move(valid)), column(column_) {}
    std::string symbol;
    std::vector<std::string> valid_names;
    int column;

  private:
    static std::string make_message(const std::string& name,
                                    const std::vector<std::string>& valid, int column) {
        std::string msg = "unknown symbol '" + name + "' (column " + std::to_string(column) + ")";
        if (!valid.empty()) {
            msg += "; valid names include:";
            std::size_t shown = 0;
            for (const auto& v : valid) {
                msg += ' ' + v;
                if (++shown == 12) { msg += " ..."; break; }
            }
        }
        return msg;
    }
};

}  // namespace jetinv
