#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/errors.hpp"
#include "jetinv/rational.hpp"

namespace jetinv {

enum class SymbolKind { base, fiber, tower, constant };

/// A named indeterminate. Two symbols are equal iff their names are equal;
/// the kind records how jet operators treat it (it never affects arithmetic).
struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::constant;

    bool operator==(const Symbol& other) const { return name == other.name; }
    bool operator<(const Symbol& other) const { return name < other.name; }
};

/// variable name → exponent (> 0). An empty map is the unit monomial.
using Monomial = std::map<std::string, int>;

inline int monomial_degree(const Monomial& m) {
    int d = 0;
    for (const auto& [name, e] : m) d += e;
    return d;
}

/// Graded lexicographic order over alphabetically sorted variable names.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = monomial_degree(a), db = monomial_degree(b);
        if (da != db) return da < db;
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() && ib != b.end()) {
            if (ia->first != ib->first) {
                // whichever monomial carries the alphabetically earlier variable
                // has the larger exponent vector at the first differing slot
                return ia->first > ib->first;
            }
            if (ia->second != ib->second) return ia->second < ib->second;
            ++ia;
            ++ib;
        }
        return ia == a.end() && ib != b.end();
    }
};

namespace detail {

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (const auto& [name, e] : b) r[name] += e;
    return r;
}

/// Divides a by b; every exponent of b must be covered by a.
inline std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (const auto& [name, e] : b) {
        auto it = r.find(name);
        if (it == r.end() || it->second < e) return std::nullopt;
        it->second -= e;
        if (it->second == 0) r.erase(it);
    }
    return r;
}

inline Monomial mono_min(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (const auto& [name, e] : a) {
        auto it = b.find(name);
        if (it != b.end()) r[name] = std::min(e, it->second);
    }
    return r;
}

}  // namespace detail

/// Process-wide cap on monomial counts; overflows raise ExprTooLarge instead
/// of letting a runaway expansion hang.
inline std::size_t& monomial_limit() {
    static std::size_t limit = 100000;
    return limit;
}

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
  public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() = default;

    static Polynomial constant(const Rational& c) {
        Polynomial p;
        if (c != 0) p.terms_.emplace(Monomial{}, c);
        return p;
    }

    static Polynomial one() { return constant(Rational(1)); }

    static Polynomial variable(const std::string& name) {
        Polynomial p;
        p.terms_.emplace(Monomial{{name, 1}}, Rational(1));
        return p;
    }

    static Polynomial term(Monomial m, const Rational& c) {
        Polynomial p;
        if (c != 0) p.terms_.emplace(std::move(m), c);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    std::optional<Rational> as_constant() const {
        if (terms_.empty()) return Rational(0);
        if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
        return std::nullopt;
    }

    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Largest term under the monomial order. Polynomial must be nonzero.
    const std::pair<const Monomial, Rational>& leading() const { return *terms_.rbegin(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
        return d;
    }

    int degree_in(const std::string& name) const {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(name);
            if (it != m.end()) d = std::max(d, it->second);
        }
        return d;
    }

    std::set<std::string> symbols() const {
        std::set<std::string> s;
        for (const auto& [m, c] : terms_)
            for (const auto& [name, e] : m) s.insert(name);
        return s;
    }

    bool contains_symbol(const std::string& name) const {
        for (const auto& [m, c] : terms_)
            if (m.count(name)) return true;
        return false;
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, c);
        check_size();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
        check_size();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        const std::size_t limit = monomial_limit();
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                r.add_term(detail::mono_mul(ma, mb), ca * cb);
                if (r.terms_.size() > limit) throw ExprTooLarge(r.terms_.size(), limit);
            }
        }
        return r;
    }

    friend Polynomial operator*(const Rational& c, Polynomial p) {
        if (c == 0) return Polynomial();
        for (auto& [m, v] : p.terms_) v *= c;
        return p;
    }

    Polynomial pow(int k) const {
        if (k < 0) throw Error("Polynomial::pow: negative exponent");
        Polynomial r = one();
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    Polynomial derivative(const std::string& name) const {
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(name);
            if (it == m.end()) continue;
            Monomial dm = m;
            int e = it->second;
            if (e == 1)
                dm.erase(name);
            else
                dm[name] = e - 1;
            r.add_term(dm, c * e);
        }
        return r;
    }

    Rational evaluate(const std::map<std::string, Rational>& values) const {
        Rational acc(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (const auto& [name, e] : m) {
                auto it = values.find(name);
                if (it == values.end()) throw UnassignedSymbol(name);
                t *= jetinv::pow(it->second, e);
            }
            acc += t;
        }
        return acc;
    }

    /// Positive rational c such that (1/c)·p has coprime integer coefficients.
    Rational rational_content() const {
        if (terms_.empty()) return Rational(1);
        mpz_class num_gcd(0), den_lcm(1);
        for (const auto& [m, c] : terms_) {
            num_gcd = gcd(num_gcd, c.get_num());
            den_lcm = lcm(den_lcm, c.get_den());
        }
        if (num_gcd == 0) num_gcd = 1;
        Rational r(num_gcd, den_lcm);
        r.canonicalize();
        return r;
    }

    /// Greatest monomial dividing every term.
    Monomial monomial_content() const {
        if (terms_.empty()) return {};
        Monomial m = terms_.begin()->first;
        for (const auto& [mono, c] : terms_) {
            m = detail::mono_min(m, mono);
            if (m.empty()) break;
        }
        return m;
    }

    Polynomial divided_by_monomial(const Monomial& m) const {
        Polynomial r;
        for (const auto& [mono, c] : terms_) {
            auto q = detail::mono_div(mono, m);
            if (!q) throw Error("divided_by_monomial: not divisible");
            r.terms_.emplace(std::move(*q), c);
        }
        return r;
    }

    /// Views the polynomial as univariate in `name`: degree → coefficient.
    std::map<int, Polynomial> collect_by(const std::string& name) const {
        std::map<int, Polynomial> out;
        for (const auto& [m, c] : terms_) {
            Monomial rest = m;
            int e = 0;
            auto it = rest.find(name);
            if (it != rest.end()) {
                e = it->second;
                rest.erase(it);
            }
            out[e].add_term(rest, c);
        }
        return out;
    }

    bool operator==(const Polynomial& rhs) const { return terms_ == rhs.terms_; }

  private:
    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    void check_size() const {
        const std::size_t limit = monomial_limit();
        if (terms_.size() > limit) throw ExprTooLarge(terms_.size(), limit);
    }

    TermMap terms_;
};

namespace detail {

/// Exact multivariate division; quotient must exist (callers guarantee it).
inline Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("divide_exact: division by zero polynomial");
    Polynomial q, r = a;
    const auto& [mb, cb] = b.leading();
    while (!r.is_zero()) {
        const auto& [mr, cr] = r.leading();
        auto mq = mono_div(mr, mb);
        if (!mq) throw Error("divide_exact: division is not exact");
        Polynomial t = Polynomial::term(std::move(*mq), cr / cb);
        q += t;
        r -= t * b;
    }
    return q;
}

inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

inline Polynomial primitive_positive(Polynomial p) {
    if (p.is_zero()) return p;
    Rational c = p.rational_content();
    if (p.leading().second < 0) c = -c;
    if (c != 1) p = detail::divide_exact(p, Polynomial::constant(c));
    return p;
}

inline Polynomial poly_gcd_many(const std::vector<Polynomial>& ps) {
    Polynomial g;
    for (const auto& p : ps) {
        g = poly_gcd(g, p);
        if (!g.is_zero() && g.is_constant()) return Polynomial::one();
    }
    return g;
}

/// Pseudo-remainder of a by b, both viewed as univariate in `v` with
/// polynomial coefficients. Returns an associate of the classical prem.
inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, const std::string& v) {
    const int db = b.degree_in(v);
    auto b_by_v = b.collect_by(v);
    const Polynomial& lcb = b_by_v.rbegin()->second;
    while (!a.is_zero()) {
        const int da = a.degree_in(v);
        if (da < db) break;
        auto a_by_v = a.collect_by(v);
        const Polynomial& lca = a_by_v.rbegin()->second;
        Monomial shift_m;
        if (da > db) shift_m[v] = da - db;
        a = lcb * a - lca * Polynomial::term(shift_m, Rational(1)) * b;
    }
    return a;
}

/// Content of p with respect to v: gcd of its univariate coefficients.
inline Polynomial content_in(const Polynomial& p, const std::string& v) {
    std::vector<Polynomial> coeffs;
    for (auto& [deg, c] : p.collect_by(v)) coeffs.push_back(std::move(c));
    return poly_gcd_many(coeffs);
}

/// GCD over Q[x1..xn] by primitive pseudo-remainder sequences, returned
/// primitive with positive leading coefficient (unique up to that choice).
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return primitive_positive(b);
    if (b.is_zero()) return primitive_positive(a);

    const Monomial ma = a.monomial_content();
    const Monomial mb = b.monomial_content();
    const Monomial m = mono_min(ma, mb);
    Polynomial pa = primitive_positive(a.divided_by_monomial(ma));
    Polynomial pb = primitive_positive(b.divided_by_monomial(mb));

    Polynomial result = Polynomial::term(m, Rational(1));
    if (pa.is_constant() || pb.is_constant()) return result;

    const std::set<std::string> sa = pa.symbols();
    std::vector<std::string> common;
    for (const auto& s : pb.symbols())
        if (sa.count(s)) common.push_back(s);
    if (common.empty()) return result;

    // main variable: smallest worst-case degree keeps the PRS short
    std::string v = common.front();
    int best = std::max(pa.degree_in(v), pb.degree_in(v));
    for (const auto& s : common) {
        int d = std::max(pa.degree_in(s), pb.degree_in(s));
        if (d < best) {
            best = d;
            v = s;
        }
    }

    Polynomial cont_a = content_in(pa, v);
    Polynomial cont_b = content_in(pb, v);
    Polynomial f = divide_exact(pa, cont_a);
    Polynomial g = divide_exact(pb, cont_b);
    result = result * poly_gcd(cont_a, cont_b);

    if (f.degree_in(v) < g.degree_in(v)) std::swap(f, g);
    while (true) {
        if (g.degree_in(v) == 0) {
            // primitive inputs share no factor involving v
            return primitive_positive(result);
        }
        Polynomial r = pseudo_remainder(f, g, v);
        if (r.is_zero()) {
            Polynomial gp = divide_exact(g, content_in(g, v));
            return primitive_positive(result * gp);
        }
        f = std::move(g);
        g = divide_exact(r, content_in(r, v));
        g = primitive_positive(std::move(g));
    }
}

inline std::string poly_to_string(const Polynomial& p);

}  // namespace detail

/// Exact symbolic expression held as a canonical reduced rational function:
/// numerator and denominator are coprime integer-coefficient polynomials with
/// no common integer content, and the denominator's leading coefficient is
/// positive. Equality is syntactic equality of that form.
class Expr {
  public:
    Expr() : num_(), den_(Polynomial::one()) {}

    static Expr from_int(long n) { return Expr(Polynomial::constant(Rational(n)), Polynomial::one()); }

    static Expr from_rational(const Rational& q) {
        Expr e(Polynomial::constant(q), Polynomial::one());
        e.canonicalize();
        return e;
    }

    static Expr from_symbol(const std::string& name) {
        return Expr(Polynomial::variable(name), Polynomial::one());
    }

    static Expr from_symbol(const Symbol& s) { return from_symbol(s.name); }

    static Expr from_polynomial(Polynomial p) {
        Expr e(std::move(p), Polynomial::one());
        e.canonicalize();
        return e;
    }

    /// Builds n/d in canonical form; throws ZeroDenominator when d = 0.
    static Expr fraction(Polynomial n, Polynomial d) {
        if (d.is_zero()) throw ZeroDenominator();
        Expr e(std::move(n), std::move(d));
        e.canonicalize();
        return e;
    }

    bool is_zero() const { return num_.is_zero(); }

    bool is_one() const { return num_ == Polynomial::one() && den_ == Polynomial::one(); }

    std::optional<Rational> as_rational() const {
        auto n = num_.as_constant();
        auto d = den_.as_constant();
        if (n && d) return *n / *d;
        return std::nullopt;
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    friend Expr operator+(const Expr& a, const Expr& b) {
        Expr r(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        r.canonicalize();
        return r;
    }

    friend Expr operator-(const Expr& a, const Expr& b) {
        Expr r(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
        r.canonicalize();
        return r;
    }

    Expr operator-() const { return Expr(-num_, den_, true); }

    friend Expr operator*(const Expr& a, const Expr& b) {
        Expr r(a.num_ * b.num_, a.den_ * b.den_);
        r.canonicalize();
        return r;
    }

    friend Expr operator/(const Expr& a, const Expr& b) {
        if (b.is_zero()) throw ZeroDenominator();
        Expr r(a.num_ * b.den_, a.den_ * b.num_);
        r.canonicalize();
        return r;
    }

    Expr& operator+=(const Expr& rhs) { return *this = *this + rhs; }
    Expr& operator-=(const Expr& rhs) { return *this = *this - rhs; }
    Expr& operator*=(const Expr& rhs) { return *this = *this * rhs; }
    Expr& operator/=(const Expr& rhs) { return *this = *this / rhs; }

    Expr pow(int k) const {
        if (k == 0) return from_int(1);
        if (k > 0) return Expr(num_.pow(k), den_.pow(k), true);
        if (is_zero()) throw ZeroDenominator();
        Expr r(den_.pow(-k), num_.pow(-k));
        r.canonicalize();  // restores the sign convention
        return r;
    }

    /// Formal partial derivative; every other symbol is held constant.
    Expr derivative(const std::string& name) const {
        if (!num_.contains_symbol(name) && !den_.contains_symbol(name)) return Expr();
        Expr r(num_.derivative(name) * den_ - num_ * den_.derivative(name), den_ * den_);
        r.canonicalize();
        return r;
    }

    Expr derivative(const Symbol& s) const { return derivative(s.name); }

    /// Substitution followed by normalization. All bindings are applied
    /// simultaneously in one parallel pass, so values may mention binding
    /// keys (z -> lambda*z scales, {z -> z_y, z_y -> z} swaps); nothing is
    /// ever re-substituted.
    Expr substituted(const std::map<std::string, Expr>& bindings) const {
        if (bindings.empty()) return *this;
        bool touches = false;
        for (const auto& [key, value] : bindings) {
            if (num_.contains_symbol(key) || den_.contains_symbol(key)) {
                touches = true;
                break;
            }
        }
        if (!touches) return *this;
        Expr n = substitute_poly(num_, bindings);
        Expr d = substitute_poly(den_, bindings);
        if (d.is_zero()) throw ZeroDenominator("substitution makes the denominator vanish identically");
        return n / d;
    }

    Rational evaluate_exact(const std::map<std::string, Rational>& values) const {
        Rational d = den_.evaluate(values);
        if (d == 0) throw DivisionByZeroAtPoint();
        return num_.evaluate(values) / d;
    }

    std::set<std::string> symbols() const {
        std::set<std::string> s = num_.symbols();
        auto ds = den_.symbols();
        s.insert(ds.begin(), ds.end());
        return s;
    }

    bool contains_symbol(const std::string& name) const {
        return num_.contains_symbol(name) || den_.contains_symbol(name);
    }

    bool operator==(const Expr& rhs) const { return num_ == rhs.num_ && den_ == rhs.den_; }

    std::string str() const;

  private:
    Expr(Polynomial n, Polynomial d, bool) : num_(std::move(n)), den_(std::move(d)) {}

    Expr(Polynomial n, Polynomial d) : num_(std::move(n)), den_(std::move(d)) {}

    static Expr substitute_poly(const Polynomial& p, const std::map<std::string, Expr>& bindings) {
        Expr acc;
        for (const auto& [m, c] : p.terms()) {
            Expr t = from_rational(c);
            for (const auto& [name, e] : m) {
                auto it = bindings.find(name);
                Expr base = (it != bindings.end()) ? it->second : from_symbol(name);
                t *= base.pow(e);
            }
            acc += t;
        }
        return acc;
    }

    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Polynomial::one();
            return;
        }
        Polynomial g = detail::poly_gcd(num_, den_);
        if (!(g == Polynomial::one())) {
            num_ = detail::divide_exact(num_, g);
            den_ = detail::divide_exact(den_, g);
        }
        // scale so that both parts are integer polynomials sharing no content
        Rational cn = num_.rational_content();
        Rational cd = den_.rational_content();
        Rational s = cn / cd;  // canonical: coprime positive num/den
        num_ = (Rational(s.get_num()) / cn) * num_;
        den_ = (Rational(s.get_den()) / cd) * den_;
        if (den_.leading().second < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

namespace detail {

inline void append_term(std::string& out, const Monomial& m, const Rational& c, bool first) {
    Rational a = c;
    if (first) {
        if (a < 0) {
            out += '-';
            a = -a;
        }
    } else {
        out += (a < 0) ? " - " : " + ";
        if (a < 0) a = -a;
    }
    const bool unit = (a == 1);
    if (m.empty()) {
        out += to_string(a);
        return;
    }
    bool need_star = false;
    if (!unit) {
        out += to_string(a);
        need_star = true;
    }
    for (const auto& [name, e] : m) {
        if (need_star) out += '*';
        out += name;
        if (e != 1) {
            out += '^';
            out += std::to_string(e);
        }
        need_star = true;
    }
}

inline std::string poly_to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    const auto& terms = p.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        append_term(out, it->first, it->second, first);
        first = false;
    }
    return out;
}

}  // namespace detail

inline std::string Expr::str() const {
    if (den_ == Polynomial::one()) return detail::poly_to_string(num_);
    std::string n = detail::poly_to_string(num_);
    if (num_.term_count() > 1) n = '(' + n + ')';
    std::string d = detail::poly_to_string(den_);
    bool bare = false;
    if (den_.term_count() == 1) {
        const auto& [m, c] = den_.leading();
        bare = (m.empty() && c > 0) || (c == 1 && m.size() == 1);
    }
    if (!bare) d = '(' + d + ')';
    return n + '/' + d;
}

}  // namespace jetinv
