#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/expr.hpp"
#include "jetinv/fields.hpp"
#include "jetinv/jet.hpp"
#include "jetinv/numeric.hpp"

namespace jetinv {

/// A named differential invariant: a rational function of the jet coordinates
/// annihilated by every prolonged symmetry generator.
struct Invariant {
    std::string name;
    int order = 0;
    Expr body;
};

/// Count of basic invariants of order <= k (defined for k >= 1).
inline long nu(int k) {
    if (k < 1) throw Error("nu: defined for k >= 1");
    return (static_cast<long>(k) * k + k - 2) / 2;
}

/// Invariants of exactly order k generated on top of the lower orders.
inline long mu(int k) { return k >= 2 ? nu(k) - (k > 1 ? nu(k - 1) : 0) : 0; }

/// The 14 basic invariants of orders 2..5.
inline const std::vector<Invariant>& invariant_catalog() {
    static const std::vector<Invariant> cat = [] {
        auto fs = [](int i, int j) { return Expr::from_symbol(fiber_name({i, j})); };
        const Expr z = fs(0, 0), zy = fs(1, 0), zu = fs(0, 1);
        const Expr zuu = fs(0, 2), zuuu = fs(0, 3);
        const Expr three = Expr::from_int(3);
        const Expr uu_step = zuu * z / zu.pow(2);

        Expr j21 = fs(2, 0) * z / zy.pow(2);
        Expr j22 = fs(1, 1) * z / (zy * zu);

        Expr j31 = fs(3, 0) * z.pow(2) / zy.pow(3);
        Expr j32 = fs(2, 1) * z.pow(2) / (zy.pow(2) * zu);
        Expr j33 = fs(1, 2) * z.pow(2) / (zu.pow(2) * zy) - j22 * uu_step;

        Expr j41 = fs(4, 0) * z.pow(3) / zy.pow(4);
        Expr j42 = fs(3, 1) * z.pow(3) / (zy.pow(3) * zu);
        Expr j43 = fs(2, 2) * z.pow(3) / (zu.pow(2) * zy.pow(2)) - j32 * uu_step;
        Expr j44 = fs(1, 3) * z.pow(3) / (zy * zu.pow(3)) - three * j33 * uu_step -
                   j22 * zuuu * z.pow(2) / zu.pow(3);

        Expr j51 = fs(5, 0) * z.pow(4) / zy.pow(5);
        Expr j52 = fs(4, 1) * z.pow(4) / (zy.pow(4) * zu);
        Expr j53 = fs(3, 2) * z.pow(4) / (zy.pow(3) * zu.pow(2)) - j42 * uu_step;
        Expr j54 = fs(2, 3) * z.pow(4) / (zy.pow(2) * zu.pow(3)) - three * j43 * uu_step -
                   j32 * zuuu * z.pow(2) / zu.pow(3);
        Expr j55 = fs(1, 4) * z.pow(4) / (zy * zu.pow(4)) - Expr::from_int(6) * j44 * uu_step -
                   three * j33 * uu_step.pow(2) - Expr::from_int(4) * j33 * zuuu * z.pow(2) / zu.pow(3) -
                   j22 * fs(0, 4) * z.pow(3) / zu.pow(4);

        return std::vector<Invariant>{
            {"J21", 2, j21}, {"J22", 2, j22},
            {"J31", 3, j31}, {"J32", 3, j32}, {"J33", 3, j33},
            {"J41", 4, j41}, {"J42", 4, j42}, {"J43", 4, j43}, {"J44", 4, j44},
            {"J51", 5, j51}, {"J52", 5, j52}, {"J53", 5, j53}, {"J54", 5, j54}, {"J55", 5, j55},
        };
    }();
    return cat;
}

inline std::vector<Invariant> catalog_slice(int order) {
    std::vector<Invariant> out;
    for (const auto& j : invariant_catalog())
        if (j.order == order) out.push_back(j);
    return out;
}

inline const Invariant& catalog_invariant(const std::string& name) {
    for (const auto& j : invariant_catalog())
        if (j.name == name) return j;
    throw Error("no catalog invariant named '" + name + "'");
}

/// Numerator of e grouped by its monomials in the tower symbols prefix_*,
/// each group divided by the (tower-free) denominator. Splitting the residual
/// of the arbitrary-function generator this way shows which jet values of the
/// function fail to cancel.
inline std::vector<std::pair<std::string, Expr>> tower_coefficients(const Expr& e,
                                                                    const std::string& prefix) {
    auto is_tower_var = [&](const std::string& name) {
        if (name.size() <= prefix.size() + 1 || name.compare(0, prefix.size(), prefix) != 0 ||
            name[prefix.size()] != '_')
            return false;
        for (std::size_t i = prefix.size() + 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
        return true;
    };
    for (const auto& name : e.den().symbols())
        if (is_tower_var(name)) return {{"1", e}};  // tower in denominator: report whole

    std::map<Monomial, Polynomial, MonomialOrder> groups;
    for (const auto& [m, c] : e.num().terms()) {
        Monomial tower_part, rest;
        for (const auto& [name, exp] : m)
            (is_tower_var(name) ? tower_part : rest)[name] = exp;
        groups[tower_part] += Polynomial::term(rest, c);
    }
    std::vector<std::pair<std::string, Expr>> out;
    for (const auto& [tm, poly] : groups) {
        std::string label;
        for (const auto& [name, exp] : tm) {
            if (!label.empty()) label += '*';
            label += name;
            if (exp != 1) label += '^' + std::to_string(exp);
        }
        if (label.empty()) label = "1";
        out.emplace_back(label, Expr::fraction(poly, e.den()));
    }
    return out;
}

struct GeneratorCheck {
    std::string generator;
    bool pass = false;
    Expr residual;
    std::vector<std::pair<std::string, Expr>> tower_residuals;  // Y4 only
};

struct InvarianceReport {
    std::string invariant;
    int order = 0;
    bool pass = false;
    std::vector<GeneratorCheck> checks;
};

/// Applies every prolonged generator to the candidate body; for the
/// arbitrary-function generator the residual must vanish coefficient-wise in
/// the tower symbols (equivalently: identically).
inline InvarianceReport verify_invariance(const Invariant& j) {
    InvarianceReport rep;
    rep.invariant = j.name;
    rep.order = j.order;
    rep.pass = true;
    const int k = std::max(j.order, jet_order(j.body));
    JetContext ctx(k, {"H"});
    for (const auto& gen : symmetry_generators()) {
        VectorField prolonged = prolong(gen, k, ctx);
        Expr residual = apply(prolonged, j.body);
        GeneratorCheck chk;
        chk.generator = gen.name;
        chk.residual = residual;
        chk.pass = residual.is_zero();
        if (gen.name == "Y4" && !residual.is_zero())
            chk.tower_residuals = tower_coefficients(residual, "H");
        rep.pass = rep.pass && chk.pass;
        rep.checks.push_back(std::move(chk));
    }
    return rep;
}

/// Gradient of an invariant along the given coordinates, exactly evaluated.
inline Eigen::RowVectorXd invariant_gradient(const Invariant& j,
                                             const std::map<std::string, Rational>& exact,
                                             const std::vector<std::string>& coords) {
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t c = 0; c < coords.size(); ++c)
        row(static_cast<Eigen::Index>(c)) =
            to_double(j.body.derivative(coords[c]).evaluate_exact(exact));
    return row;
}

inline Eigen::MatrixXd invariant_jacobian(std::span<const Invariant> js, const JetPoint& p,
                                          const std::vector<std::string>& coords) {
    auto exact = p.exact_values();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(js.size()), static_cast<Eigen::Index>(coords.size()));
    for (std::size_t r = 0; r < js.size(); ++r)
        m.row(static_cast<Eigen::Index>(r)) = invariant_gradient(js[r], exact, coords);
    return m;
}

/// True iff the Jacobian with respect to the fiber coordinates has full row
/// rank at the point (all catalog invariants are base-independent, so the
/// base directions carry no information).
inline bool functional_independence(std::span<const Invariant> js, const JetPoint& p,
                                    double tol = kDefaultRankTolerance) {
    if (js.empty()) return true;
    for (const char* locus : {"z", "z_y", "z_u"})
        if (p.has(locus) && p.at(locus) == 0.0) throw SingularPoint(locus);
    int kmax = 0;
    for (const auto& j : js) kmax = std::max(kmax, j.order);
    JetContext ctx(kmax);
    for (const auto& name : ctx.coordinates())
        if (!p.has(name)) throw UnassignedSymbol(name);
    Eigen::MatrixXd m = invariant_jacobian(js, p, ctx.fiber_coordinates());
    return svd_rank(m, tol) == static_cast<int>(js.size());
}

}  // namespace jetinv
