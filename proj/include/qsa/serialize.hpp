// serialize.hpp
// JSON forms for quantum payloads: a statevector serializes as a list of
// (re, im) pairs in canonical phase form (first nonzero amplitude real and
// positive).

#pragma once

#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qsa/statevector.hpp"

namespace qsa {

inline nlohmann::json state_to_json(const StateVector& sv) {
    const StateVector c = canonical_phase(sv);
    nlohmann::json amps = nlohmann::json::array();
    for (std::size_t i = 0; i < c.dim(); ++i) {
        amps.push_back(nlohmann::json::array({c[i].real(), c[i].imag()}));
    }
    return amps;
}

inline StateVector state_from_json(const nlohmann::json& amps) {
    if (!amps.is_array() || amps.empty()) {
        throw std::invalid_argument("state payload must be a non-empty array");
    }
    std::vector<Complex> v;
    v.reserve(amps.size());
    for (const auto& pair : amps) {
        v.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < v.size()) ++n;
    if ((std::size_t{1} << n) != v.size()) {
        throw std::invalid_argument("state payload length must be a power of two");
    }
    return StateVector(n, std::move(v));
}

} // namespace qsa
