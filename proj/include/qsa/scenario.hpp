// scenario.hpp
// Self-describing JSON scenario files: parsing, validation with precise error
// locations, canonical serialization, and the replay hash.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsa/protocol.hpp"

namespace qsa {

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct Scenario {
    int schema_version = 1;
    int n_parties = 3;
    std::size_t bid_length = 4;
    bool random_bids = false;
    std::vector<Bid> bids;  // empty when random_bids
    double decoy_rate = 0.5;
    std::optional<std::size_t> decoy_count;  // explicit override of ceil(K*m)
    double error_threshold = 0.0;
    TiePolicy tie_policy = TiePolicy::Abort;
    std::uint64_t seed = 0;
    AttackPlan attack;
    std::optional<std::vector<std::vector<CanonicalState>>> fixed_carriers;
    std::optional<std::vector<std::string>> fixed_orders;
    bool debug_registers = false;
};

namespace detail {

inline std::vector<CanonicalState> parse_state_list(const std::string& text,
                                                    const std::string& where) {
    std::vector<CanonicalState> states;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        try {
            states.push_back(canonical_state_from_label(token));
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(where + ": " + e.what());
        }
    }
    if (states.empty()) throw ScenarioError(where + ": empty state list");
    return states;
}

} // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
    Scenario s;
    const auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) {
            throw ScenarioError(std::string("scenario.") + key + ": missing");
        }
        return j.at(key);
    };

    if (j.contains("schema_version")) s.schema_version = j.at("schema_version").get<int>();
    if (s.schema_version != 1) {
        throw ScenarioError("scenario.schema_version: unsupported version");
    }

    s.n_parties = need("n_parties").get<int>();
    if (s.n_parties < 3) throw ScenarioError("scenario.n_parties: must be at least 3");

    const auto len = need("bid_length").get<long long>();
    if (len < 2 || len % 2 != 0) {
        throw ScenarioError("scenario.bid_length: bid_length must be even and >= 2");
    }
    s.bid_length = static_cast<std::size_t>(len);

    const auto& bids = need("bids");
    if (bids.is_string() && bids.get<std::string>() == "random") {
        s.random_bids = true;
    } else if (bids.is_array()) {
        if (bids.size() != static_cast<std::size_t>(s.n_parties - 1)) {
            throw ScenarioError("scenario.bids: expected n_parties-1 bids, got " +
                                std::to_string(bids.size()));
        }
        for (const auto& b : bids) {
            Bid bid;
            try {
                bid = Bid(b.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(std::string("scenario.bids: ") + e.what());
            }
            if (bid.length() != s.bid_length) {
                throw ScenarioError("scenario.bids: every bid must have bid_length bits");
            }
            s.bids.push_back(std::move(bid));
        }
    } else {
        throw ScenarioError("scenario.bids: must be \"random\" or an array");
    }

    s.decoy_rate = need("decoy_rate").get<double>();
    if (s.decoy_rate <= 0.0 || s.decoy_rate > 1.0) {
        throw ScenarioError("scenario.decoy_rate: must be in (0, 1]");
    }
    if (j.contains("decoy_count")) {
        const auto d = j.at("decoy_count").get<long long>();
        if (d < 1) throw ScenarioError("scenario.decoy_count: must be >= 1");
        s.decoy_count = static_cast<std::size_t>(d);
    }
    if (j.contains("error_threshold")) {
        s.error_threshold = j.at("error_threshold").get<double>();
        if (s.error_threshold < 0.0 || s.error_threshold >= 1.0) {
            throw ScenarioError("scenario.error_threshold: must be in [0, 1)");
        }
    }
    if (j.contains("tie_policy")) {
        const auto p = j.at("tie_policy").get<std::string>();
        if (p == "abort") s.tie_policy = TiePolicy::Abort;
        else if (p == "lowest_id") s.tie_policy = TiePolicy::LowestId;
        else throw ScenarioError("scenario.tie_policy: must be \"abort\" or \"lowest_id\"");
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("debug_registers")) s.debug_registers = j.at("debug_registers").get<bool>();

    if (j.contains("attack") && !j.at("attack").is_null()) {
        const auto& a = j.at("attack");
        try {
            s.attack.kind = attack_from_label(a.at("type").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(std::string("scenario.attack.type: ") + e.what());
        }
        if (a.contains("basis_policy")) {
            try {
                s.attack.policy =
                    basis_policy_from_label(a.at("basis_policy").get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(std::string("scenario.attack.basis_policy: ") + e.what());
            }
        }
        if (a.contains("edge")) {
            s.attack.edge = a.at("edge").get<std::string>();
            if (s.attack.edge != "s2" && s.attack.edge != "s5" && s.attack.edge != "s6") {
                throw ScenarioError("scenario.attack.edge: must be s2, s5 or s6");
            }
        }
        if (a.contains("target")) s.attack.target = a.at("target").get<int>();
        if (s.attack.kind != AttackKind::None &&
            (s.attack.target < 1 || s.attack.target >= s.n_parties)) {
            throw ScenarioError("scenario.attack.target: must name a bidder (1..n_parties-1)");
        }
        if (a.contains("fabricated_bid")) {
            Bid fb;
            try {
                fb = Bid(a.at("fabricated_bid").get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(std::string("scenario.attack.fabricated_bid: ") + e.what());
            }
            if (fb.length() != s.bid_length) {
                throw ScenarioError("scenario.attack.fabricated_bid: must have bid_length bits");
            }
            s.attack.fabricated_bid = std::move(fb);
        }
        if (a.contains("fabricated_winner")) {
            s.attack.fabricated_winner = a.at("fabricated_winner").get<int>();
            if (*s.attack.fabricated_winner < 1 ||
                *s.attack.fabricated_winner >= s.n_parties) {
                throw ScenarioError("scenario.attack.fabricated_winner: must name a bidder");
            }
        }
        if (a.contains("colluders")) {
            for (const auto& c : a.at("colluders")) {
                const int id = c.get<int>();
                if (id < 1 || id >= s.n_parties) {
                    throw ScenarioError("scenario.attack.colluders: must name bidders");
                }
                s.attack.colluders.push_back(id);
            }
        }
        if (s.attack.kind == AttackKind::FalseAnnouncement && !s.attack.fabricated_bid) {
            throw ScenarioError("scenario.attack.fabricated_bid: required for false_announcement");
        }
        if (s.attack.kind == AttackKind::Collusion && s.attack.colluders.empty()) {
            throw ScenarioError("scenario.attack.colluders: required for collusion");
        }
    }

    if (j.contains("fixed") && !j.at("fixed").is_null()) {
        const auto& f = j.at("fixed");
        if (f.contains("carriers")) {
            std::vector<std::vector<CanonicalState>> carriers;
            for (const auto& c : f.at("carriers")) {
                auto states = detail::parse_state_list(c.get<std::string>(),
                                                       "scenario.fixed.carriers");
                if (states.size() != s.bid_length) {
                    throw ScenarioError(
                        "scenario.fixed.carriers: each list must have bid_length states");
                }
                for (const CanonicalState st : states) {
                    if (basis_of(st) == Basis::Y) {
                        throw ScenarioError(
                            "scenario.fixed.carriers: carrier states never use the Y basis");
                    }
                }
                carriers.push_back(std::move(states));
            }
            if (carriers.size() != static_cast<std::size_t>(s.n_parties - 1)) {
                throw ScenarioError("scenario.fixed.carriers: expected n_parties-1 lists");
            }
            s.fixed_carriers = std::move(carriers);
        }
        if (f.contains("orders")) {
            std::vector<std::string> orders;
            for (const auto& o : f.at("orders")) {
                const auto text = o.get<std::string>();
                try {
                    const Permutation p = Permutation::from_order_string(text);
                    if (p.size() != s.bid_length) {
                        throw std::invalid_argument("order must cover bid_length positions");
                    }
                } catch (const std::invalid_argument& e) {
                    throw ScenarioError(std::string("scenario.fixed.orders: ") + e.what());
                }
                orders.push_back(text);
            }
            if (orders.size() != static_cast<std::size_t>(s.n_parties - 1)) {
                throw ScenarioError("scenario.fixed.orders: expected n_parties-1 orders");
            }
            s.fixed_orders = std::move(orders);
        }
    }
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError("scenario parse error in " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

// Canonical serialization: field order is fixed by nlohmann's sorted keys and
// optional fields are emitted only when set, so equal scenarios serialize to
// equal bytes.
inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["schema_version"] = s.schema_version;
    j["n_parties"] = s.n_parties;
    j["bid_length"] = s.bid_length;
    if (s.random_bids) {
        j["bids"] = "random";
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const Bid& b : s.bids) arr.push_back(b.bits());
        j["bids"] = arr;
    }
    j["decoy_rate"] = s.decoy_rate;
    if (s.decoy_count) j["decoy_count"] = *s.decoy_count;
    j["error_threshold"] = s.error_threshold;
    j["tie_policy"] = s.tie_policy == TiePolicy::Abort ? "abort" : "lowest_id";
    j["seed"] = s.seed;
    if (s.debug_registers) j["debug_registers"] = true;
    if (s.attack.kind != AttackKind::None) {
        nlohmann::json a;
        a["type"] = to_label(s.attack.kind);
        a["basis_policy"] = to_label(s.attack.policy);
        a["edge"] = s.attack.edge;
        a["target"] = s.attack.target;
        if (s.attack.fabricated_bid) a["fabricated_bid"] = s.attack.fabricated_bid->bits();
        if (s.attack.fabricated_winner) a["fabricated_winner"] = *s.attack.fabricated_winner;
        if (!s.attack.colluders.empty()) a["colluders"] = s.attack.colluders;
        j["attack"] = a;
    }
    if (s.fixed_carriers || s.fixed_orders) {
        nlohmann::json f;
        if (s.fixed_carriers) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& states : *s.fixed_carriers) {
                std::string text;
                for (std::size_t i = 0; i < states.size(); ++i) {
                    if (i) text += ' ';
                    text += to_label(states[i]);
                }
                arr.push_back(text);
            }
            f["carriers"] = arr;
        }
        if (s.fixed_orders) f["orders"] = *s.fixed_orders;
        j["fixed"] = f;
    }
    return j;
}

// FNV-1a over the canonical serialization; identifies a scenario for replay.
inline std::uint64_t scenario_hash(const Scenario& s) {
    const std::string dump = scenario_to_json(s).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Resolve the per-trial auction configuration; random bids are drawn from the
// trial stream.
inline AuctionConfig make_auction_config(const Scenario& s, RngStream& trial_rng) {
    AuctionConfig cfg;
    cfg.n_parties = s.n_parties;
    cfg.bid_length = s.bid_length;
    if (s.random_bids) {
        for (int j = 1; j < s.n_parties; ++j) {
            cfg.bids.push_back(Bid::random(s.bid_length, trial_rng));
        }
    } else {
        cfg.bids = s.bids;
    }
    cfg.decoy_policy.rate_k = s.decoy_rate;
    cfg.decoy_override = s.decoy_count;
    cfg.error_threshold = s.error_threshold;
    cfg.tie_policy = s.tie_policy;
    cfg.attack = s.attack;
    cfg.fixed_carriers = s.fixed_carriers;
    if (s.fixed_orders) {
        std::vector<Permutation> perms;
        for (const auto& o : *s.fixed_orders) {
            perms.push_back(Permutation::from_order_string(o));
        }
        cfg.fixed_permutations = std::move(perms);
    }
    cfg.debug_registers = s.debug_registers;
    return cfg;
}

} // namespace qsa
