#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/fields.hpp"
#include "jetinv/invariants.hpp"
#include "jetinv/numeric.hpp"

namespace jetinv {

namespace detail {

/// d^j/du^j of u^m as an expression (falling-factorial coefficient).
inline Expr monomial_derivative(int m, int j) {
    if (j > m) return Expr();
    long coeff = 1;
    for (int i = 0; i < j; ++i) coeff *= (m - i);
    return Expr::from_int(coeff) * Expr::from_symbol("u").pow(m - j);
}

inline VectorField substitute_field(const VectorField& x, const std::map<std::string, Expr>& bind,
                                    const std::string& name) {
    VectorField r = x;
    r.name = name;
    r.coeff_y = x.coeff_y.substituted(bind);
    r.coeff_u = x.coeff_u.substituted(bind);
    r.coeff_z = x.coeff_z.substituted(bind);
    for (auto& [sigma, coeff] : r.fiber) coeff = coeff.substituted(bind);
    return r;
}

}  // namespace detail

/// Generators whose values span the orbit tangent space at order k: the three
/// concrete fields plus the arbitrary-function family realized over the
/// monomial basis u^0..u^k. The prolonged family depends on the function only
/// through its k-jet at the point, and polynomials of degree <= k realize
/// every such jet, so the finite basis loses nothing.
inline std::vector<VectorField> span_generators(int k) {
    JetContext ctx(k, {"H"});
    std::vector<VectorField> out;
    out.push_back(prolong(y_translation(), k, ctx));
    out.push_back(prolong(y_scaling(), k, ctx));
    out.push_back(prolong(z_scaling(), k, ctx));
    VectorField family = prolong(u_reparametrization(), k, ctx);
    for (int m = 0; m <= k; ++m) {
        std::map<std::string, Expr> bind;
        for (int j = 0; j <= ctx.tower_depth(); ++j)
            bind[ctx.tower_symbol("H", j)] = detail::monomial_derivative(m, j);
        out.push_back(detail::substitute_field(family, bind, "Y4[u^" + std::to_string(m) + "]"));
    }
    return out;
}

struct TangentSpan {
    std::vector<std::string> coordinates;  // column labels
    std::vector<std::string> generators;   // row labels
    Eigen::MatrixXd vectors;
    int rank = 0;
    double tol = kDefaultRankTolerance;
    bool stable = true;  // rank unchanged one tolerance decade up and down
};

namespace detail {

inline Eigen::MatrixXd field_value_matrix(const std::vector<VectorField>& fields,
                                          const JetPoint& theta,
                                          const std::vector<std::string>& coords) {
    auto exact = theta.exact_values();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(fields.size()),
                      static_cast<Eigen::Index>(coords.size()));
    for (std::size_t r = 0; r < fields.size(); ++r) {
        for (std::size_t c = 0; c < coords.size(); ++c) {
            const Expr* coeff = nullptr;
            if (coords[c] == "y")
                coeff = &fields[r].coeff_y;
            else if (coords[c] == "u")
                coeff = &fields[r].coeff_u;
            else if (auto s = parse_fiber_name(coords[c]))
                coeff = &fields[r].fiber_coeff(*s);
            double v = 0.0;
            if (coeff && !coeff->is_zero()) v = to_double(coeff->evaluate_exact(exact));
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return m;
}

}  // namespace detail

/// Evaluates the orbit tangent span at a point of the k-jet space.
inline TangentSpan tangent_span(const JetPoint& theta, int k, double tol = kDefaultRankTolerance) {
    auto fields = span_generators(k);
    TangentSpan span;
    span.coordinates = JetContext(k).coordinates();
    for (const auto& f : fields) span.generators.push_back(f.name);
    span.vectors = detail::field_value_matrix(fields, theta, span.coordinates);
    span.tol = tol;
    span.rank = svd_rank(span.vectors, tol);
    span.stable = svd_rank(span.vectors, tol * 10) == span.rank &&
                  svd_rank(span.vectors, tol / 10) == span.rank;
    return span;
}

namespace detail {

inline int generic_max_rank(int k, double tol) {
    static std::map<std::pair<int, double>, int> cache;
    static std::mutex mutex;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find({k, tol});
        if (it != cache.end()) return it->second;
    }
    constexpr std::uint64_t kReferenceSeed = 0xA11CEull;
    JetContext ctx(k);
    int best = 0;
    for (int i = 0; i < 20; ++i) {
        JetPoint p = sample_jet_point(ctx, kReferenceSeed, static_cast<std::uint64_t>(i));
        best = std::max(best, tangent_span(p, k, tol).rank);
    }
    std::lock_guard<std::mutex> lock(mutex);
    cache[{k, tol}] = best;
    return best;
}

}  // namespace detail

/// Regular means the span has the maximal dimension observed over a cached
/// reference sample of generic points.
inline bool is_regular(const JetPoint& theta, int k, double tol = kDefaultRankTolerance) {
    return tangent_span(theta, k, tol).rank == detail::generic_max_rank(k, tol);
}

inline int jet_space_dimension(int k) { return 2 + (k + 2) * (k + 1) / 2; }

struct CodimFailure {
    int sample = 0;
    int rank = 0;
    int codim = 0;
    std::map<std::string, double> point;
};

struct CodimReport {
    int order = 0;
    int dim_jet_space = 0;
    long expected_codim = 0;  // nu(k)
    int samples = 0;
    int pass_count = 0;
    bool pass = false;
    std::vector<CodimFailure> failures;
};

/// At sampled generic points the orbit codimension dim J^k - rank Z^k must
/// equal the invariant count nu(k).
inline CodimReport verify_codimension(int k, int samples, std::uint64_t seed,
                                      double tol = kDefaultRankTolerance) {
    if (k < 1) throw Error("verify_codimension: k must be >= 1");
    CodimReport rep;
    rep.order = k;
    rep.dim_jet_space = jet_space_dimension(k);
    rep.expected_codim = nu(k);
    rep.samples = samples;
    JetContext ctx(k);
    auto fields = span_generators(k);
    auto coords = ctx.coordinates();
    for (int i = 0; i < samples; ++i) {
        JetPoint p = sample_jet_point(ctx, seed, static_cast<std::uint64_t>(i));
        int rank = svd_rank(detail::field_value_matrix(fields, p, coords), tol);
        int codim = rep.dim_jet_space - rank;
        if (codim == rep.expected_codim) {
            ++rep.pass_count;
        } else {
            rep.failures.push_back({i, rank, codim, p.values()});
        }
    }
    rep.pass = rep.pass_count == samples;
    return rep;
}

struct StratumReport {
    int order = 0;
    int dim_stratum = 0;       // fiber coordinate count
    long dim_formula = 0;      // C(k+2,2)
    bool dim_matches = false;
    int expected_rank = 0;     // k + 2
    bool rank_formula_applicable = true;  // false at k = 0, where it exceeds the dimension
    int samples = 0;
    int pass_count = 0;
    int min_rank = 0;
    int max_rank = 0;
    bool pass = false;
};

/// Rank of the restricted stationary-subalgebra fields on the stratum
/// y = u = 0 (evolutionary parts only; the function factor of the third
/// generator is realized over the monomial basis u^0..u^k).
inline StratumReport verify_stratum_rank(int k, int samples, std::uint64_t seed,
                                         double tol = kDefaultRankTolerance) {
    if (k < 0) throw Error("verify_stratum_rank: k must be >= 0");
    StratumReport rep;
    rep.order = k;
    rep.expected_rank = k + 2;
    rep.samples = samples;

    JetContext ctx(k);
    auto coords = ctx.fiber_coordinates();
    rep.dim_stratum = static_cast<int>(coords.size());
    rep.dim_formula = static_cast<long>(k + 2) * (k + 1) / 2;
    rep.dim_matches = rep.dim_stratum == rep.dim_formula;
    rep.rank_formula_applicable = rep.expected_rank <= rep.dim_stratum;

    std::vector<VectorField> fields;
    fields.push_back(evolutionary_restriction(stationary_y_scaling(), k, ctx));
    fields.push_back(evolutionary_restriction(stationary_z_scaling(), k, ctx));
    for (int m = 0; m <= k; ++m)
        fields.push_back(evolutionary_restriction(stationary_u_field(m), k, ctx));

    rep.min_rank = rep.dim_stratum + 1;
    rep.max_rank = 0;
    for (int i = 0; i < samples; ++i) {
        JetPoint p = sample_stratum_point(ctx, seed, static_cast<std::uint64_t>(i));
        int rank = svd_rank(detail::field_value_matrix(fields, p, coords), tol);
        rep.min_rank = std::min(rep.min_rank, rank);
        rep.max_rank = std::max(rep.max_rank, rank);
        if (!rep.rank_formula_applicable || rank == rep.expected_rank) ++rep.pass_count;
    }
    rep.pass = rep.dim_matches && rep.pass_count == samples;
    return rep;
}

}  // namespace jetinv
