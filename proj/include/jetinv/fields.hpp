#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/errors.hpp"
#include "jetinv/expr.hpp"
#include "jetinv/jet.hpp"

namespace jetinv {

/// A point vector field a d/dy + b d/du + c d/dz, optionally prolonged: the
/// fiber map then carries its coefficient on d/dz_sigma for every |sigma| up
/// to the prolongation order ((0,0) is the d/dz coefficient itself).
struct VectorField {
    std::string name;
    Expr coeff_y;
    Expr coeff_u;
    Expr coeff_z;
    std::map<MultiIndex, Expr> fiber;
    int order = 0;
    bool evolutionary = false;

    const Expr& fiber_coeff(const MultiIndex& s) const {
        static const Expr zero;
        auto it = fiber.find(s);
        return it == fiber.end() ? zero : it->second;
    }
};

inline VectorField make_point_field(std::string name, Expr a, Expr b, Expr c) {
    VectorField x;
    x.name = std::move(name);
    x.coeff_y = std::move(a);
    x.coeff_u = std::move(b);
    x.coeff_z = std::move(c);
    x.fiber[MultiIndex{0, 0}] = x.coeff_z;
    return x;
}

/// Contact pairing of the first prolongation: phi = c - z_y a - z_u b.
inline Expr generating_function(const VectorField& x) {
    return x.coeff_z - Expr::from_symbol("z_y") * x.coeff_y -
           Expr::from_symbol("z_u") * x.coeff_u;
}

namespace detail {

inline JetContext field_context(const VectorField& x, int k) {
    std::set<std::string> prefixes = detect_tower_prefixes(x.coeff_y);
    for (const auto& e : {x.coeff_u, x.coeff_z})
        for (const auto& p : detect_tower_prefixes(e)) prefixes.insert(p);
    return JetContext(k, std::vector<std::string>(prefixes.begin(), prefixes.end()));
}

/// D_sigma(phi) for all |sigma| <= k; D_sigma = D_y^i D_u^j (the total
/// derivatives commute, so the split is immaterial).
inline std::map<MultiIndex, Expr> derivative_table(const Expr& phi, int k, const JetContext& ctx) {
    std::map<MultiIndex, Expr> d;
    d[MultiIndex{0, 0}] = phi;
    for (int i = 1; i <= k; ++i)
        d[MultiIndex{i, 0}] = total_derivative(d[MultiIndex{i - 1, 0}], 'y', ctx);
    for (int j = 1; j <= k; ++j)
        for (int i = 0; i + j <= k; ++i)
            d[MultiIndex{i, j}] = total_derivative(d[MultiIndex{i, j - 1}], 'u', ctx);
    return d;
}

}  // namespace detail

/// Prolongs a point field to the k-jet space. The coefficient on d/dz_sigma
/// is D_sigma(phi) + a z_{sigma+(1,0)} + b z_{sigma+(0,1)} with phi the
/// generating function; this reproduces the classical contact prolongation.
inline VectorField prolong(const VectorField& x, int k, const JetContext& ctx_in) {
    JetContext ctx = ctx_in.extended(k);
    VectorField r = x;
    r.order = k;
    r.fiber.clear();
    auto dphi = detail::derivative_table(generating_function(x), k, ctx);
    for (const auto& sigma : ctx.fiber_indices()) {
        Expr transport;
        if (!x.coeff_y.is_zero())
            transport += x.coeff_y * Expr::from_symbol(fiber_name({sigma.dy + 1, sigma.du}));
        if (!x.coeff_u.is_zero())
            transport += x.coeff_u * Expr::from_symbol(fiber_name({sigma.dy, sigma.du + 1}));
        r.fiber[sigma] = dphi.at(sigma) + transport;
    }
    return r;
}

inline VectorField prolong(const VectorField& x, int k) {
    return prolong(x, k, detail::field_context(x, k));
}

/// Evolutionary representative restricted to the fiber directions: base
/// transport dropped, coefficient on d/dz_sigma equal to D_sigma(phi).
inline VectorField evolutionary_restriction(const VectorField& x, int k, const JetContext& ctx_in) {
    JetContext ctx = ctx_in.extended(k);
    VectorField r;
    r.name = x.name + "_ev";
    r.order = k;
    r.evolutionary = true;
    Expr phi = generating_function(x);
    r.coeff_z = phi;
    r.fiber = detail::derivative_table(phi, k, ctx);
    return r;
}

inline VectorField evolutionary_restriction(const VectorField& x, int k) {
    return evolutionary_restriction(x, k, detail::field_context(x, k));
}

/// Derivation action of a prolonged field on an expression.
inline Expr apply(const VectorField& x, const Expr& e) {
    const int eo = jet_order(e);
    if (eo > x.order) throw OrderMismatch(eo, x.order);
    Expr acc;
    for (const auto& name : e.symbols()) {
        if (name == "y") {
            acc += e.derivative(name) * x.coeff_y;
        } else if (name == "u") {
            acc += e.derivative(name) * x.coeff_u;
        } else if (auto s = parse_fiber_name(name)) {
            acc += e.derivative(name) * x.fiber_coeff(*s);
        }
        // towers and free constants are not moved by point transformations
    }
    return acc;
}

// --- generator catalog -----------------------------------------------------

/// Y1: translation of the dependent variable y.
inline VectorField y_translation() {
    return make_point_field("Y1", Expr::from_int(1), Expr(), Expr());
}

/// Y2: scaling of y.
inline VectorField y_scaling() {
    return make_point_field("Y2", Expr::from_symbol("y"), Expr(), Expr());
}

/// Y3: scaling of the fiber coordinate z.
inline VectorField z_scaling() {
    return make_point_field("Y3", Expr(), Expr(), Expr::from_symbol("z"));
}

/// Y4: reparametrization of the control by an arbitrary function, modeled by
/// the formal tower H_0, H_1, ... with d/du shifting the index.
inline VectorField u_reparametrization() {
    return make_point_field("Y4", Expr(), Expr::from_symbol("H_0"), Expr());
}

inline std::vector<VectorField> symmetry_generators() {
    return {y_translation(), y_scaling(), z_scaling(), u_reparametrization()};
}

/// Concrete control reparametrization u^m d/du (jet-value basis element).
inline VectorField u_monomial_field(int m) {
    return make_point_field("Y4[u^" + std::to_string(m) + "]", Expr(),
                            Expr::from_symbol("u").pow(m), Expr());
}

// Stationary subalgebra of the base point y = u = 0.
inline VectorField stationary_y_scaling() {
    auto x = y_scaling();
    x.name = "Z1";
    return x;
}

inline VectorField stationary_z_scaling() {
    auto x = z_scaling();
    x.name = "Z2";
    return x;
}

/// Z3 with l(u) = u^m: the field u^{m+1} d/du vanishing at u = 0.
inline VectorField stationary_u_field(int m) {
    return make_point_field("Z3[u^" + std::to_string(m) + "]", Expr(),
                            Expr::from_symbol("u").pow(m + 1), Expr());
}

}  // namespace jetinv
