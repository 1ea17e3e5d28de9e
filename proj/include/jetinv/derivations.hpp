#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/invariants.hpp"
#include "jetinv/numeric.hpp"

namespace jetinv {

/// Scaled total derivative commuting with every prolonged generator; maps
/// invariants to invariants one order higher.
struct InvariantDerivation {
    std::string name;
    char direction;  // 'y' or 'u'
    Expr scale;
};

inline const InvariantDerivation& nabla1() {
    static const InvariantDerivation d{
        "nabla1", 'y', Expr::from_symbol("z") / Expr::from_symbol("z_y")};
    return d;
}

inline const InvariantDerivation& nabla2() {
    static const InvariantDerivation d{
        "nabla2", 'u', Expr::from_symbol("z") / Expr::from_symbol("z_u")};
    return d;
}

inline Expr apply_derivation(const InvariantDerivation& d, const Expr& e, const JetContext& ctx) {
    return d.scale * total_derivative(e, d.direction, ctx);
}

inline Invariant apply_derivation(const InvariantDerivation& d, const Invariant& j) {
    std::set<std::string> prefixes = detect_tower_prefixes(j.body);
    JetContext ctx(j.order + 1, std::vector<std::string>(prefixes.begin(), prefixes.end()));
    Expr body = apply_derivation(d, j.body, ctx);
    return Invariant{d.name + "(" + j.name + ")", jet_order(body), body};
}

struct ProbeCheck {
    std::string probe;
    Expr lhs;
    Expr rhs;
    bool pass = false;
};

struct CommutatorReport {
    std::vector<ProbeCheck> probes;
    bool pass = false;
};

/// Checks [nabla1, nabla2] = (-1 + J22) nabla1 + (1 - J22) nabla2 on a finite
/// probe set (coordinates and second-order invariants); operator equality on
/// all smooth functions is not mechanically checkable.
inline CommutatorReport verify_commutator() {
    const Expr j22 = catalog_invariant("J22").body;
    const Expr one = Expr::from_int(1);
    JetContext ctx(6);
    auto n1 = [&](const Expr& e) { return apply_derivation(nabla1(), e, ctx); };
    auto n2 = [&](const Expr& e) { return apply_derivation(nabla2(), e, ctx); };

    std::vector<std::pair<std::string, Expr>> probes = {
        {"z", Expr::from_symbol("z")},
        {"z_y", Expr::from_symbol("z_y")},
        {"z_u", Expr::from_symbol("z_u")},
        {"J21", catalog_invariant("J21").body},
        {"J22", j22},
    };

    CommutatorReport rep;
    rep.pass = true;
    for (const auto& [name, e] : probes) {
        ProbeCheck chk;
        chk.probe = name;
        chk.lhs = n1(n2(e)) - n2(n1(e));
        chk.rhs = (j22 - one) * n1(e) + (one - j22) * n2(e);
        chk.pass = (chk.lhs == chk.rhs);
        rep.pass = rep.pass && chk.pass;
        rep.probes.push_back(std::move(chk));
    }
    return rep;
}

struct SyzygyCheck {
    std::string name;
    Expr residual;
    bool pass = false;
};

struct SyzygyReport {
    std::vector<SyzygyCheck> checks;
    bool pass = false;
};

/// The 19 relations tying derivations of the basic invariants to the next
/// order: four at order 2->3, the cross relation they imply, and fourteen at
/// orders 3->4 and 4->5. Every identity is expanded fully into jet
/// coordinates and must reduce to the exact zero.
inline SyzygyReport verify_syzygies() {
    JetContext ctx(6);
    auto j = [](const char* name) { return catalog_invariant(name).body; };
    auto n1 = [&](const Expr& e) { return apply_derivation(nabla1(), e, ctx); };
    auto n2 = [&](const Expr& e) { return apply_derivation(nabla2(), e, ctx); };
    auto c = [](long v) { return Expr::from_int(v); };

    const Expr j21 = j("J21"), j22 = j("J22");
    const Expr j31 = j("J31"), j32 = j("J32"), j33 = j("J33");
    const Expr j41 = j("J41"), j42 = j("J42"), j43 = j("J43"), j44 = j("J44");
    const Expr j51 = j("J51"), j52 = j("J52"), j53 = j("J53"), j54 = j("J54"), j55 = j("J55");

    std::vector<std::pair<std::string, Expr>> relations;
    auto rel = [&](std::string name, const Expr& lhs, const Expr& rhs) {
        relations.emplace_back(std::move(name), lhs - rhs);
    };

    rel("nabla1(J21)", n1(j21), j21 - c(2) * j21 * j21 + j31);
    rel("nabla2(J21)", n2(j21), j21 - c(2) * j21 * j22 + j32);
    rel("nabla1(J22)", n1(j22), j22 - j21 * j22 - j22 * j22 + j32);
    rel("nabla2(J22)", n2(j22), j22 - j22 * j22 + j33);

    rel("cross(J21,J22)", n2(j21) - j21 + j21 * j22, n1(j22) - j22 + j22 * j22);

    rel("nabla1(J31)", n1(j31), c(2) * j31 - c(3) * j21 * j31 + j41);
    rel("nabla2(J31)", n2(j31), c(2) * j31 - c(3) * j22 * j31 + j42);
    rel("nabla1(J32)", n1(j32), c(2) * j32 - c(2) * j21 * j32 - j22 * j32 + j42);
    rel("nabla2(J32)", n2(j32), c(2) * j32 - c(2) * j22 * j32 + j43);
    rel("nabla1(J33)", n1(j33), c(2) * j33 - c(2) * j21 * j33 - c(3) * j22 * j33 + j43);
    rel("nabla2(J33)", n2(j33), c(2) * j33 - j22 * j33 + j44);

    rel("nabla1(J41)", n1(j41), c(3) * j41 - c(4) * j21 * j41 + j51);
    rel("nabla2(J41)", n2(j41), c(3) * j41 - c(4) * j22 * j41 + j52);
    rel("nabla1(J42)", n1(j42), c(3) * j42 - c(3) * j21 * j42 - j22 * j42 + j52);
    rel("nabla2(J42)", n2(j42), c(3) * j42 - c(3) * j22 * j42 + j53);
    rel("nabla1(J43)", n1(j43), c(3) * j43 - c(2) * j21 * j43 - c(2) * j22 * j43 - j33 * j32 + j53);
    rel("nabla2(J43)", n2(j43), c(3) * j43 - c(2) * j22 * j43 + j54);
    rel("nabla1(J44)", n1(j44), c(3) * j44 - j21 * j44 - c(4) * j22 * j44 - j33 * j33 + j54);
    rel("nabla2(J44)", n2(j44), c(3) * j44 - j22 * j44 + j55);

    SyzygyReport rep;
    rep.pass = true;
    for (auto& [name, residual] : relations) {
        SyzygyCheck chk{std::move(name), residual, residual.is_zero()};
        rep.pass = rep.pass && chk.pass;
        rep.checks.push_back(std::move(chk));
    }
    return rep;
}

struct GenerationOrderReport {
    int order = 0;
    int candidate_count = 0;
    std::vector<std::string> accepted;
    std::vector<std::string> rejected;
    std::vector<std::map<std::string, double>> points;  // independence certificates
    std::vector<int> base_ranks;
    std::vector<int> final_ranks;
};

struct GenerationResult {
    std::vector<Invariant> invariants;  // cumulative independent set
    std::vector<GenerationOrderReport> orders;
};

/// Grows the field of invariants from {J21, J22} by the two derivations,
/// keeping at each order a maximal functionally independent subset decided by
/// numeric Jacobian ranks at sampled generic points (a pragmatic stand-in for
/// exact transcendence-degree computation). The independent count at order k
/// must come out to k.
inline GenerationResult generate_invariants(int max_order, std::uint64_t seed = 42,
                                            double tol = kDefaultRankTolerance) {
    if (max_order < 2) throw Error("generate_invariants: max_order must be >= 2");
    constexpr int kPoints = 5;

    GenerationResult result;
    result.invariants = catalog_slice(2);

    for (int k = 3; k <= max_order; ++k) {
        std::vector<Invariant> previous_order;
        for (const auto& inv : result.invariants)
            if (inv.order == k - 1) previous_order.push_back(inv);

        std::vector<Invariant> candidates;
        for (const auto& inv : previous_order) {
            candidates.push_back(apply_derivation(nabla1(), inv));
            candidates.push_back(apply_derivation(nabla2(), inv));
        }

        JetContext ctx(k);
        const auto coords = ctx.fiber_coordinates();

        GenerationOrderReport rep;
        rep.order = k;
        rep.candidate_count = static_cast<int>(candidates.size());

        std::vector<std::map<std::string, Rational>> exact_points;
        std::vector<Eigen::MatrixXd> accepted_rows(kPoints);
        for (int i = 0; i < kPoints; ++i) {
            JetPoint p = sample_jet_point(ctx, seed, static_cast<std::uint64_t>(k) * 100 + i);
            rep.points.push_back(p.values());
            exact_points.push_back(p.exact_values());
            Eigen::MatrixXd rows(result.invariants.size(), coords.size());
            for (std::size_t r = 0; r < result.invariants.size(); ++r)
                rows.row(static_cast<Eigen::Index>(r)) =
                    invariant_gradient(result.invariants[r], exact_points[i], coords);
            accepted_rows[i] = std::move(rows);
            rep.base_ranks.push_back(svd_rank(accepted_rows[i], tol));
        }

        int accepted_count = 0;
        for (const auto& cand : candidates) {
            bool independent_everywhere = true;
            std::vector<Eigen::RowVectorXd> cand_rows(kPoints);
            for (int i = 0; i < kPoints; ++i) {
                cand_rows[i] = invariant_gradient(cand, exact_points[i], coords);
                Eigen::MatrixXd stacked(accepted_rows[i].rows() + 1, coords.size());
                stacked << accepted_rows[i], cand_rows[i];
                if (svd_rank(stacked, tol) != accepted_rows[i].rows() + 1)
                    independent_everywhere = false;
            }
            if (independent_everywhere) {
                for (int i = 0; i < kPoints; ++i) {
                    Eigen::MatrixXd stacked(accepted_rows[i].rows() + 1, coords.size());
                    stacked << accepted_rows[i], cand_rows[i];
                    accepted_rows[i] = std::move(stacked);
                }
                result.invariants.push_back(cand);
                rep.accepted.push_back(cand.name);
                ++accepted_count;
            } else {
                rep.rejected.push_back(cand.name);
            }
        }
        for (int i = 0; i < kPoints; ++i) rep.final_ranks.push_back(svd_rank(accepted_rows[i], tol));

        if (accepted_count < k) throw RankDeficiency(k, accepted_count, k);
        if (accepted_count > k)
            throw Error("generate_invariants: " + std::to_string(accepted_count) +
                        " independent invariants at order " + std::to_string(k) +
                        ", expected " + std::to_string(k));
        result.orders.push_back(std::move(rep));
    }
    return result;
}

}  // namespace jetinv
