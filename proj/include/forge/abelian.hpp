#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

// A finitely generated abelian group extended by divisible and symbolic parts:
//   Z_{d1} x ... x Z_{dk}  x  (C^x)^circle_rank  x  Z^free_rank  x  named summands.
// The finite part is kept in invariant-factor form (d1 | d2 | ... | dk, di >= 2).
// Symbolic summands carry groups the engine treats as opaque anchors (e.g. a
// truncation placeholder) and are compared by name.
struct AbelianGroup {
    std::vector<std::int64_t> factors;
    int circle_rank = 0;
    int free_rank = 0;
    std::vector<std::string> symbols;

    AbelianGroup() = default;

    static AbelianGroup trivial() { return AbelianGroup(); }

    static AbelianGroup circle() {
        AbelianGroup g;
        g.circle_rank = 1;
        return g;
    }

    static AbelianGroup free(int rank) {
        AbelianGroup g;
        g.free_rank = rank;
        return g;
    }

    static AbelianGroup symbol(const std::string& name) {
        AbelianGroup g;
        g.symbols.push_back(name);
        return g;
    }

    static AbelianGroup cyclic(std::int64_t n) { return from_orders({n}); }

    static AbelianGroup elementary_two_group(int dim) {
        return from_orders(std::vector<std::int64_t>(static_cast<std::size_t>(dim), 2));
    }

    // Builds the canonical invariant-factor form from an arbitrary list of
    // cyclic orders (1s are dropped, 0s count as free Z summands).
    static AbelianGroup from_orders(const std::vector<std::int64_t>& orders) {
        AbelianGroup g;
        // Gather prime-power components per prime.
        std::map<std::int64_t, std::vector<std::int64_t>> primary;
        for (std::int64_t n : orders) {
            if (n < 0) throw std::invalid_argument("AbelianGroup: negative order");
            if (n == 0) {
                ++g.free_rank;
                continue;
            }
            std::int64_t rest = n;
            for (std::int64_t p = 2; p * p <= rest; ++p) {
                if (rest % p != 0) continue;
                std::int64_t pk = 1;
                while (rest % p == 0) {
                    pk *= p;
                    rest /= p;
                }
                primary[p].push_back(pk);
            }
            if (rest > 1) primary[rest].push_back(rest);
        }
        // k-th largest prime powers across primes multiply into the k-th
        // invariant factor from the top.
        std::size_t depth = 0;
        for (auto& [p, v] : primary) {
            std::sort(v.begin(), v.end(), std::greater<>());
            depth = std::max(depth, v.size());
        }
        std::vector<std::int64_t> inv(depth, 1);
        for (auto& [p, v] : primary)
            for (std::size_t i = 0; i < v.size(); ++i) inv[i] *= v[i];
        std::sort(inv.begin(), inv.end());
        g.factors = std::move(inv);
        return g;
    }

    bool is_trivial() const {
        return factors.empty() && circle_rank == 0 && free_rank == 0 && symbols.empty();
    }

    bool is_finite() const { return circle_rank == 0 && free_rank == 0 && symbols.empty(); }

    // Order of the finite part; callers must check is_finite() for the whole group.
    std::int64_t order() const {
        std::int64_t o = 1;
        for (std::int64_t d : factors) o *= d;
        return o;
    }

    friend AbelianGroup operator+(const AbelianGroup& a, const AbelianGroup& b) {
        std::vector<std::int64_t> orders = a.factors;
        orders.insert(orders.end(), b.factors.begin(), b.factors.end());
        AbelianGroup g = from_orders(orders);
        g.circle_rank = a.circle_rank + b.circle_rank;
        g.free_rank += a.free_rank + b.free_rank;
        g.symbols = a.symbols;
        g.symbols.insert(g.symbols.end(), b.symbols.begin(), b.symbols.end());
        std::sort(g.symbols.begin(), g.symbols.end());
        return g;
    }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
        auto sa = a.symbols, sb = b.symbols;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        return a.factors == b.factors && a.circle_rank == b.circle_rank &&
               a.free_rank == b.free_rank && sa == sb;
    }
    friend bool operator!=(const AbelianGroup& a, const AbelianGroup& b) { return !(a == b); }

    std::string to_string() const {
        if (is_trivial()) return "0";
        std::ostringstream out;
        bool first = true;
        auto sep = [&]() {
            if (!first) out << " x ";
            first = false;
        };
        for (int i = 0; i < free_rank; ++i) {
            sep();
            out << "Z";
        }
        for (std::int64_t d : factors) {
            sep();
            out << "Z" << d;
        }
        for (int i = 0; i < circle_rank; ++i) {
            sep();
            out << "Cx";
        }
        for (const auto& s : symbols) {
            sep();
            out << s;
        }
        return out.str();
    }
};

}  // namespace forge
