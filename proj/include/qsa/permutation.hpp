// permutation.hpp
// Secret qubit reorderings. map[i] is the source position of the qubit that
// sits at position i after the permutation is applied.

#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsa/rng.hpp"
#include "qsa/statevector.hpp"

namespace qsa {

struct Permutation {
    std::vector<std::size_t> map;

    std::size_t size() const { return map.size(); }

    static Permutation identity(std::size_t n) {
        Permutation p;
        p.map.resize(n);
        std::iota(p.map.begin(), p.map.end(), std::size_t{0});
        return p;
    }

    static Permutation random(std::size_t n, RngStream& rng) {
        Permutation p = identity(n);
        rng.shuffle(p.map);
        return p;
    }

    // 1-indexed source-order listing, e.g. "1324" places source qubit 1 at
    // position 1, source 3 at position 2, and so on.
    static Permutation from_order_string(const std::string& order) {
        Permutation p;
        p.map.reserve(order.size());
        for (const char c : order) {
            if (c < '1' || c > '9') {
                throw std::invalid_argument("order string must be digits 1-9: " + order);
            }
            p.map.push_back(static_cast<std::size_t>(c - '1'));
        }
        p.validate();
        return p;
    }

    std::string to_order_string() const {
        std::string s;
        for (const std::size_t v : map) s += static_cast<char>('1' + v);
        return s;
    }

    void validate() const {
        std::vector<bool> seen(map.size(), false);
        for (const std::size_t v : map) {
            if (v >= map.size() || seen[v]) {
                throw std::invalid_argument("permutation map is not a bijection");
            }
            seen[v] = true;
        }
    }
};

// inverse.map[p.map[i]] = i, so applying both in either order is the identity
inline Permutation invert(const Permutation& p) {
    p.validate();
    Permutation inv;
    inv.map.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv.map[p.map[i]] = i;
    return inv;
}

// Amplitude-level application: the qubit at source position map[i] moves to
// position i.
inline StateVector apply_permutation(const StateVector& sv, const Permutation& perm) {
    perm.validate();
    if (perm.size() != sv.n_qubits()) {
        throw std::invalid_argument("permutation length must equal qubit count");
    }
    const std::size_t n = sv.n_qubits();
    std::vector<Complex> out(sv.dim());
    for (std::size_t x = 0; x < sv.dim(); ++x) {
        std::size_t y = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bit = (x >> (n - 1 - i)) & 1;
            y |= bit << (n - 1 - perm.map[i]);
        }
        out[x] = sv[y];
    }
    return StateVector(n, std::move(out));
}

} // namespace qsa
