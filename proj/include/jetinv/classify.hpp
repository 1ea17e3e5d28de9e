#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/fields.hpp"
#include "jetinv/invariants.hpp"
#include "jetinv/jet.hpp"

namespace jetinv {

/// Right-hand-side function f(y, u) of the oscillation equation: a rational
/// expression in y, u, free constants, and formal-function towers (alpha_0,
/// beta_0, ... with d/du shifting the index). Never mentions fiber symbols.
class ControlFunction {
  public:
    explicit ControlFunction(Expr body) : body_(std::move(body)) {
        for (const auto& name : body_.symbols())
            if (parse_fiber_name(name))
                throw Error("control function must not mention the fiber coordinate '" + name + "'");
        for (const auto& p : detect_tower_prefixes(body_)) towers_.push_back(p);
        for (const auto& name : body_.symbols()) {
            auto pos = name.rfind('_');
            if (pos == std::string::npos) continue;
            for (const auto& t : towers_) {
                if (pos == t.size() && name.compare(0, pos, t) == 0)
                    max_tower_index_ = std::max(max_tower_index_, std::stoi(name.substr(pos + 1)));
            }
        }
    }

    const Expr& body() const { return body_; }
    const std::vector<std::string>& towers() const { return towers_; }

    /// Context able to take `extra` more u-derivatives of the function.
    JetContext context(int extra) const {
        return JetContext(0, towers_, max_tower_index_ + extra);
    }

  private:
    Expr body_;
    std::vector<std::string> towers_;
    int max_tower_index_ = 0;
};

/// z_sigma -> the sigma-partial of f, for every |sigma| <= order.
inline std::map<std::string, Expr> restriction_bindings(const ControlFunction& f, int order) {
    JetContext ctx = f.context(order);
    auto table = detail::derivative_table(f.body(), order, ctx);
    std::map<std::string, Expr> bind;
    for (const auto& [sigma, partial] : table) bind[fiber_name(sigma)] = partial;
    return bind;
}

/// Restriction J(f): every jet coordinate replaced by the matching partial
/// derivative of f, then normalized.
inline Expr restrict_invariant(const Invariant& j, const ControlFunction& f) {
    const int k = std::max(j.order, jet_order(j.body));
    auto bind = restriction_bindings(f, k);
    for (const auto& name : j.body.den().symbols()) {
        if (parse_fiber_name(name) && bind.at(name).is_zero()) throw IdenticallySingular(name);
    }
    try {
        return j.body.substituted(bind);
    } catch (const ZeroDenominator&) {
        throw IdenticallySingular(detail::poly_to_string(j.body.den()));
    }
}

enum class NormalForm { affine, quadratic, power };

inline std::string to_string(NormalForm f) {
    switch (f) {
        case NormalForm::affine: return "affine";
        case NormalForm::quadratic: return "quadratic";
        case NormalForm::power: return "power";
    }
    return "?";
}

struct FormMatch {
    NormalForm form;
    int n = 0;  // exponent for the power form
};

struct NormalFormVerdict {
    std::vector<FormMatch> matches;                    // every form whose conditions hold
    std::map<std::string, Expr> evidence;              // restricted invariant values
    std::map<std::string, std::string> indeterminate;  // form -> reason it could not be tested
    bool any() const { return !matches.empty(); }
    const FormMatch* primary() const { return matches.empty() ? nullptr : &matches.front(); }
    bool has(NormalForm f) const {
        for (const auto& m : matches)
            if (m.form == f) return true;
        return false;
    }
};

/// Tests the three coordinate-free normal forms, in the order affine (J21 = 0),
/// quadratic (J31 = 0), power with exponent n = 1..n_max
/// (J21 = (n-1)/n, J22 = 1, J31 = (n-1)(n-2)/n^2, J32 = (n-1)/n, J33 = 0).
/// All matching forms are reported; an affine function satisfies the
/// quadratic condition as well.
inline NormalFormVerdict classify(const ControlFunction& f, int n_max = 10) {
    if (n_max < 1) throw Error("classify: n_max must be >= 1");
    NormalFormVerdict verdict;
    std::map<std::string, Expr> values;
    std::map<std::string, std::string> failures;
    for (const char* name : {"J21", "J22", "J31", "J32", "J33"}) {
        try {
            values.emplace(name, restrict_invariant(catalog_invariant(name), f));
        } catch (const IdenticallySingular& e) {
            failures.emplace(name, e.what());
        }
    }
    verdict.evidence = values;

    if (values.count("J21")) {
        if (values.at("J21").is_zero()) verdict.matches.push_back({NormalForm::affine, 0});
    } else {
        verdict.indeterminate["affine"] = failures.at("J21");
    }

    if (values.count("J31")) {
        if (values.at("J31").is_zero()) verdict.matches.push_back({NormalForm::quadratic, 0});
    } else {
        verdict.indeterminate["quadratic"] = failures.at("J31");
    }

    if (values.size() == 5) {
        for (int n = 1; n <= n_max; ++n) {
            const long nn = static_cast<long>(n);
            const bool match =
                values.at("J21") == Expr::from_rational(rat(nn - 1, nn)) &&
                values.at("J22") == Expr::from_int(1) &&
                values.at("J31") == Expr::from_rational(rat((nn - 1) * (nn - 2), nn * nn)) &&
                values.at("J32") == Expr::from_rational(rat(nn - 1, nn)) &&
                values.at("J33").is_zero();
            if (match) {
                verdict.matches.push_back({NormalForm::power, n});
                break;
            }
        }
    } else {
        verdict.indeterminate["power"] = failures.begin()->second;
    }
    return verdict;
}

struct DeterminingReport {
    Expr eq1;          // A_yy
    Expr eq2;          // B_yy - 2 A_xy
    Expr eq3_f_free;   // 2 B_xy - A_xx
    Expr eq3_f_coeff;  // -3 A_y   (coefficient of f; must vanish for all f)
    bool pass = false;
    Expr induced_g;    // B_xx - C f_u - B f_y + f B_y - 2 f A_x
};

/// Checks that the flow of A(x,y) d/dx + B(x,y) d/dy + C(u) d/du preserves
/// the equation class for every right-hand side f. The third determining
/// equation carries the only f-dependence, through the term -3 f A_y, so it
/// splits into an f-free part and an f-coefficient part that must vanish
/// separately. The fourth equation does not constrain A, B: it defines the
/// induced deformation G of the right-hand side, reported as derived data
/// (with f and C kept abstract unless supplied).
inline DeterminingReport check_determining_equations(const Expr& a, const Expr& b,
                                                     const Expr* c_of_u = nullptr,
                                                     const ControlFunction* f = nullptr) {
    for (const Expr* e : {&a, &b}) {
        for (const auto& name : e->symbols()) {
            if (parse_fiber_name(name) || name == "u")
                throw Error("A and B may depend only on x, y, and free constants (got '" +
                            name + "')");
        }
    }
    auto dx = [](const Expr& e) { return e.derivative("x"); };
    auto dy = [](const Expr& e) { return e.derivative("y"); };

    DeterminingReport rep;
    rep.eq1 = dy(dy(a));
    rep.eq2 = dy(dy(b)) - Expr::from_int(2) * dx(dy(a));
    rep.eq3_f_free = Expr::from_int(2) * dx(dy(b)) - dx(dx(a));
    rep.eq3_f_coeff = Expr::from_int(-3) * dy(a);
    rep.pass = rep.eq1.is_zero() && rep.eq2.is_zero() && rep.eq3_f_free.is_zero() &&
               rep.eq3_f_coeff.is_zero();

    Expr fv = Expr::from_symbol("z");
    Expr fy = Expr::from_symbol("z_y");
    Expr fu = Expr::from_symbol("z_u");
    if (f) {
        auto bind = restriction_bindings(*f, 1);
        fv = bind.at("z");
        fy = bind.at("z_y");
        fu = bind.at("z_u");
    }
    Expr c = c_of_u ? *c_of_u : Expr::from_symbol("C_0");
    rep.induced_g = dx(dx(b)) - c * fu - b * fy + fv * dy(b) - Expr::from_int(2) * fv * dx(a);
    return rep;
}

struct SignatureRow {
    double y = 0.0;
    double u = 0.0;
    bool singular = false;
    std::string note;
    std::vector<std::pair<std::string, Rational>> values;  // catalog order
};

struct SignatureTable {
    std::vector<SignatureRow> rows;
    bool pass = false;  // every sampled point was clean
};

/// Numeric values of all 14 restricted invariants at the given (y, u) points.
/// Differing signatures at corresponding points certify two functions
/// inequivalent; matching signatures prove nothing (one-sided test). Points
/// where f, f_y, or f_u vanish are flagged singular rather than evaluated.
inline SignatureTable invariant_signature(const ControlFunction& f,
                                          const std::vector<std::pair<double, double>>& points) {
    for (const auto& name : f.body().symbols())
        if (name != "y" && name != "u") throw UnassignedSymbol(name);

    std::vector<std::pair<std::string, Expr>> restricted;
    for (const auto& j : invariant_catalog())
        restricted.emplace_back(j.name, restrict_invariant(j, f));
    auto low = restriction_bindings(f, 1);

    SignatureTable table;
    table.pass = true;
    for (const auto& [py, pu] : points) {
        SignatureRow row;
        row.y = py;
        row.u = pu;
        std::map<std::string, Rational> at{{"y", rational_from_double(py)},
                                           {"u", rational_from_double(pu)}};
        for (const char* which : {"z", "z_y", "z_u"}) {
            if (low.at(which).evaluate_exact(at) == 0) {
                row.singular = true;
                row.note = std::string(which == std::string("z") ? "f" : which == std::string("z_y") ? "f_y" : "f_u") +
                           " vanishes at this point";
                break;
            }
        }
        if (!row.singular) {
            try {
                for (const auto& [name, e] : restricted) row.values.emplace_back(name, e.evaluate_exact(at));
            } catch (const DivisionByZeroAtPoint&) {
                row.singular = true;
                row.values.clear();
                row.note = "restricted invariant is singular at this point";
            }
        }
        table.pass = table.pass && !row.singular;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace jetinv
