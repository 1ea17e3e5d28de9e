#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jetinv/errors.hpp"
#include "jetinv/expr.hpp"
#include "jetinv/jet.hpp"

namespace jetinv {

struct ParseOptions {
    /// Accept unregistered name_<digits> identifiers as new formal-function
    /// towers (used when reading control functions like alpha_0*y + beta_0).
    bool auto_towers = false;
};

/// Recursive-descent parser for the expression grammar: identifiers
/// (coordinates, tower members, free constants), integer literals, + - * /,
/// integer powers with ^, and parentheses. Positions are 1-based columns.
class ExpressionParser {
  public:
    explicit ExpressionParser(JetContext ctx, ParseOptions opts = {})
        : ctx_(std::move(ctx)), opts_(opts) {}

    Expr parse(std::string_view src) {
        tokenize(src);
        pos_ = 0;
        Expr e = parse_sum();
        if (peek().kind != Token::end)
            throw SyntaxError("unexpected '" + peek().text + "'", 1, peek().column);
        return e;
    }

    /// Context including towers auto-registered while parsing.
    const JetContext& context() const { return ctx_; }

  private:
    struct Token {
        enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end } kind;
        std::string text;
        int column;
    };

    void tokenize(std::string_view src) {
        tokens_.clear();
        std::size_t i = 0;
        while (i < src.size()) {
            char c = src[i];
            int col = static_cast<int>(i) + 1;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                tokens_.push_back({Token::number, std::string(src.substr(i, j - i)), col});
                i = j;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                          src[j] == '_'))
                    ++j;
                tokens_.push_back({Token::ident, std::string(src.substr(i, j - i)), col});
                i = j;
                continue;
            }
            Token::Kind kind;
            switch (c) {
                case '+': kind = Token::plus; break;
                case '-': kind = Token::minus; break;
                case '*': kind = Token::star; break;
                case '/': kind = Token::slash; break;
                case '^': kind = Token::caret; break;
                case '(': kind = Token::lparen; break;
                case ')': kind = Token::rparen; break;
                default:
                    throw SyntaxError(std::string("unexpected character '") + c + "'", 1, col);
            }
            tokens_.push_back({kind, std::string(1, c), col});
            ++i;
        }
        tokens_.push_back({Token::end, "end of input", static_cast<int>(src.size()) + 1});
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    Expr parse_sum() {
        Expr e = parse_product();
        while (peek().kind == Token::plus || peek().kind == Token::minus) {
            bool add = advance().kind == Token::plus;
            Expr rhs = parse_product();
            e = add ? e + rhs : e - rhs;
        }
        return e;
    }

    Expr parse_product() {
        Expr e = parse_unary();
        while (peek().kind == Token::star || peek().kind == Token::slash) {
            const Token& op = advance();
            Expr rhs = parse_unary();
            if (op.kind == Token::star) {
                e = e * rhs;
            } else {
                if (rhs.is_zero())
                    throw ZeroDenominator("division by zero (column " +
                                          std::to_string(op.column) + ")");
                e = e / rhs;
            }
        }
        return e;
    }

    Expr parse_unary() {
        bool negate = false;
        while (peek().kind == Token::plus || peek().kind == Token::minus) {
            if (advance().kind == Token::minus) negate = !negate;
        }
        Expr e = parse_power();
        return negate ? -e : e;
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (peek().kind != Token::caret) return base;
        advance();
        int exp_col = peek().column;
        Expr e = parse_unary();  // allows ^-2 and ^(3); chained ^ binds rightward
        auto q = e.as_rational();
        if (!q || !is_integer(*q))
            throw SyntaxError("exponent must be an integer", 1, exp_col);
        if (*q > 9999 || *q < -9999)
            throw SyntaxError("exponent out of range", 1, exp_col);
        return base.pow(static_cast<int>(q->get_num().get_si()));
    }

    Expr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::number: {
                advance();
                return Expr::from_rational(Rational(mpz_class(t.text)));
            }
            case Token::ident:
                advance();
                return resolve_identifier(t);
            case Token::lparen: {
                advance();
                Expr e = parse_sum();
                if (peek().kind != Token::rparen)
                    throw SyntaxError("expected ')'", 1, peek().column);
                advance();
                return e;
            }
            default:
                throw SyntaxError("expected a number, name, or '('", 1, t.column);
        }
    }

    Expr resolve_identifier(const Token& t) {
        const std::string& name = t.text;
        if (name == "y" || name == "u") return Expr::from_symbol(name);
        if (name == "z" || name.rfind("z_", 0) == 0) {
            if (parse_fiber_name(name)) return Expr::from_symbol(name);
            throw UnknownSymbol(name, valid_names(), t.column);
        }
        auto pos = name.rfind('_');
        if (pos != std::string::npos) {
            bool digits = pos + 1 < name.size();
            for (std::size_t i = pos + 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (!digits) throw UnknownSymbol(name, valid_names(), t.column);
            std::string prefix = name.substr(0, pos);
            if (!ctx_.has_tower(prefix)) {
                if (!opts_.auto_towers) throw UnknownSymbol(name, valid_names(), t.column);
                ctx_ = ctx_.with_tower(prefix);
            }
            return Expr::from_symbol(name);
        }
        return Expr::from_symbol(name);  // free constant
    }

    std::vector<std::string> valid_names() const {
        std::vector<std::string> names = ctx_.coordinates();
        for (const auto& t : ctx_.towers()) names.push_back(t + "_0.." + t + "_" +
                                                            std::to_string(ctx_.tower_depth()));
        return names;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    JetContext ctx_;
    ParseOptions opts_;
};

inline Expr parse_expression(std::string_view src, const JetContext& ctx, ParseOptions opts = {}) {
    ExpressionParser parser(ctx, opts);
    return parser.parse(src);
}

}  // namespace jetinv
