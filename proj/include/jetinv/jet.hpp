#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jetinv/errors.hpp"
#include "jetinv/expr.hpp"

namespace jetinv {

/// Derivative multi-index of a fiber coordinate: dy times d/dy, du times d/du.
/// (0,0) is the fiber coordinate z itself.
struct MultiIndex {
    int dy = 0;
    int du = 0;

    int order() const { return dy + du; }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Coordinate naming convention used everywhere, including CLI output:
/// "z" for (0,0), otherwise "z_" + dy letters 'y' + du letters 'u'.
inline std::string fiber_name(const MultiIndex& s) {
    if (s.order() == 0) return "z";
    std::string name = "z_";
    name.append(static_cast<std::size_t>(s.dy), 'y');
    name.append(static_cast<std::size_t>(s.du), 'u');
    return name;
}

inline std::optional<MultiIndex> parse_fiber_name(std::string_view name) {
    if (name == "z") return MultiIndex{0, 0};
    if (name.size() < 3 || name.substr(0, 2) != "z_") return std::nullopt;
    MultiIndex s;
    std::size_t i = 2;
    while (i < name.size() && name[i] == 'y') {
        ++s.dy;
        ++i;
    }
    while (i < name.size() && name[i] == 'u') {
        ++s.du;
        ++i;
    }
    if (i != name.size() || s.order() == 0) return std::nullopt;
    return s;
}

/// Jet order of an expression: the highest fiber-coordinate order it mentions.
inline int jet_order(const Expr& e) {
    int k = 0;
    for (const auto& name : e.symbols()) {
        if (auto s = parse_fiber_name(name)) k = std::max(k, s->order());
    }
    return k;
}

/// Prefixes of tower-shaped symbols (prefix_<digits>) mentioned by e.
inline std::set<std::string> detect_tower_prefixes(const Expr& e) {
    std::set<std::string> prefixes;
    for (const auto& name : e.symbols()) {
        auto pos = name.rfind('_');
        if (pos == std::string::npos || pos == 0 || pos + 1 >= name.size()) continue;
        bool digits = true;
        for (std::size_t i = pos + 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (digits && !parse_fiber_name(name)) prefixes.insert(name.substr(0, pos));
    }
    return prefixes;
}

/// Coordinate chart of the k-jet space of sections z = f(y, u): base symbols
/// y and u, fiber symbols z_sigma for |sigma| <= k, plus named towers of
/// formal derivatives (members prefix_0, prefix_1, ... shifted by d/du).
class JetContext {
  public:
    explicit JetContext(int order, std::vector<std::string> towers = {}, int tower_depth = -1)
        : order_(order),
          towers_(std::move(towers)),
          explicit_depth_(tower_depth >= 0),
          tower_depth_(tower_depth >= 0 ? tower_depth : order + 2) {
        if (order < 0) throw Error("JetContext: negative order");
    }

    int order() const { return order_; }
    int tower_depth() const { return tower_depth_; }
    const std::vector<std::string>& towers() const { return towers_; }

    JetContext extended(int new_order) const {
        if (new_order <= order_) return *this;
        return JetContext(new_order, towers_, explicit_depth_ ? tower_depth_ : -1);
    }

    JetContext with_tower(const std::string& prefix) const {
        if (has_tower(prefix)) return *this;
        auto t = towers_;
        t.push_back(prefix);
        return JetContext(order_, std::move(t), explicit_depth_ ? tower_depth_ : -1);
    }

    bool has_tower(const std::string& prefix) const {
        for (const auto& t : towers_)
            if (t == prefix) return true;
        return false;
    }

    static bool is_base(const std::string& name) { return name == "y" || name == "u"; }

    /// Fiber coordinates ordered by total order, y-derivatives first within
    /// each order (z, z_y, z_u, z_yy, z_yu, z_uu, ...).
    std::vector<MultiIndex> fiber_indices() const {
        std::vector<MultiIndex> out;
        for (int k = 0; k <= order_; ++k)
            for (int i = k; i >= 0; --i) out.push_back(MultiIndex{i, k - i});
        return out;
    }

    std::vector<std::string> fiber_coordinates() const {
        std::vector<std::string> out;
        for (const auto& s : fiber_indices()) out.push_back(fiber_name(s));
        return out;
    }

    /// All chart coordinates: y, u, then the fiber coordinates.
    std::vector<std::string> coordinates() const {
        std::vector<std::string> out{"y", "u"};
        auto f = fiber_coordinates();
        out.insert(out.end(), f.begin(), f.end());
        return out;
    }

    std::optional<std::pair<std::string, int>> tower_member(const std::string& name) const {
        auto pos = name.rfind('_');
        if (pos == std::string::npos || pos + 1 >= name.size()) return std::nullopt;
        for (std::size_t i = pos + 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
        std::string prefix = name.substr(0, pos);
        if (!has_tower(prefix)) return std::nullopt;
        return std::make_pair(prefix, std::stoi(name.substr(pos + 1)));
    }

    std::string tower_symbol(const std::string& prefix, int index) const {
        return prefix + "_" + std::to_string(index);
    }

    SymbolKind classify(const std::string& name) const {
        if (is_base(name)) return SymbolKind::base;
        if (parse_fiber_name(name)) return SymbolKind::fiber;
        if (tower_member(name)) return SymbolKind::tower;
        return SymbolKind::constant;
    }

    /// Image of a single coordinate symbol under the total derivative in the
    /// given direction ('y' or 'u').
    Expr symbol_step(const std::string& name, char dir) const {
        if (name == "y") return dir == 'y' ? Expr::from_int(1) : Expr();
        if (name == "u") return dir == 'u' ? Expr::from_int(1) : Expr();
        if (auto s = parse_fiber_name(name)) {
            MultiIndex next = *s;
            (dir == 'y' ? next.dy : next.du) += 1;
            return Expr::from_symbol(fiber_name(next));
        }
        if (auto t = tower_member(name)) {
            if (dir != 'u') return Expr();
            auto [prefix, index] = *t;
            if (index + 1 > tower_depth_) throw TowerExhausted(prefix, index + 1, tower_depth_);
            return Expr::from_symbol(tower_symbol(prefix, index + 1));
        }
        return Expr();  // free constant
    }

  private:
    int order_;
    std::vector<std::string> towers_;
    bool explicit_depth_;
    int tower_depth_;
};

/// Truncated total derivative d/dy or d/du: the partial in the base direction
/// plus the shift of every fiber coordinate (and, for d/du, of every tower).
/// The result lives one jet order higher; contexts extend implicitly.
inline Expr total_derivative(const Expr& e, char dir, const JetContext& ctx) {
    Expr acc;
    for (const auto& name : e.symbols()) {
        Expr step = ctx.symbol_step(name, dir);
        if (step.is_zero()) continue;
        acc += e.derivative(name) * step;
    }
    return acc;
}

/// Numeric assignment of every coordinate of a chart (towers and extra
/// symbols may be assigned on top of the chart coordinates).
class JetPoint {
  public:
    JetPoint(JetContext ctx, std::map<std::string, double> values)
        : ctx_(std::move(ctx)), values_(std::move(values)) {
        for (const auto& name : ctx_.coordinates())
            if (!values_.count(name)) throw UnassignedSymbol(name);
    }

    const JetContext& context() const { return ctx_; }
    const std::map<std::string, double>& values() const { return values_; }

    double at(const std::string& name) const {
        auto it = values_.find(name);
        if (it == values_.end()) throw UnassignedSymbol(name);
        return it->second;
    }

    bool has(const std::string& name) const { return values_.count(name) > 0; }

    std::map<std::string, Rational> exact_values() const {
        std::map<std::string, Rational> out;
        for (const auto& [name, v] : values_) out.emplace(name, rational_from_double(v));
        return out;
    }

  private:
    JetContext ctx_;
    std::map<std::string, double> values_;
};

/// Exact rational evaluation (binary64 inputs are exact rationals), converted
/// to binary64 only at the very end.
inline double evaluate(const Expr& e, const JetPoint& p) {
    return to_double(e.evaluate_exact(p.exact_values()));
}

}  // namespace jetinv
