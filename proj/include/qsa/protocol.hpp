// protocol.hpp
// The seven-step sealed-bid auction among one auctioneer and N-1 bidders:
// carrier preparation and decoy checking, bid encoding with I / i*sigma_y,
// EPR-pair post-confirmation behind a secret permutation, winner
// announcement, and verification. Every run is deterministic given its
// random stream and produces a full transcript.

#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsa/adversary.hpp"
#include "qsa/bid.hpp"
#include "qsa/permutation.hpp"
#include "qsa/rng.hpp"
#include "qsa/serialize.hpp"
#include "qsa/statevector.hpp"
#include "qsa/states.hpp"
#include "qsa/transcript.hpp"
#include "qsa/world.hpp"

namespace qsa {

// Party 0 is the auctioneer; bidders are 1..N-1.
inline std::string party_name(int id) {
    static const char* names[] = {
        "Alice", "Bob",    "Charlie", "David",  "Edgar",  "Frank",
        "George", "Harold", "Ivan",   "Jacob",  "Kevin",  "Louis",
        "Martin", "Nathan", "Oscar",  "Peter",  "Quincy", "Robert",
        "Steve",  "Thomas", "Ulrich", "Victor", "Walter", "Xavier",
        "Yuri",   "Zach"};
    if (id >= 0 && id < static_cast<int>(std::size(names))) return names[id];
    return "Bidder" + std::to_string(id);
}

struct DecoyPolicy {
    double rate_k = 0.5;  // detection rate K in (0, 1]

    std::size_t decoys_for(std::size_t m) const {
        const auto d = static_cast<std::size_t>(
            std::ceil(rate_k * static_cast<double>(m) - 1e-12));
        return d < 1 ? 1 : d;
    }
};

struct DecoyRecord {
    std::size_t position;  // index within the augmented sequence
    CanonicalState state;  // from {+, -, +y, -y}
    Basis basis;           // X or Y, consistent with state
    Slot slot;
};

struct CarrierSequence {
    int owner = 0;  // bidder id
    std::vector<CanonicalState> initial_states;
    std::vector<Slot> slots;  // data qubits in order
};

struct EprSequence {
    int owner = 0;   // encoding bidder
    int target = 0;  // holder
    std::vector<BellLabel> labels;
    Permutation perm;
    std::vector<Slot> slots;  // m qubits, in permuted order
};

enum class Verdict { Completed, AbortedChannelCheck, AbortedPostConfirmation, Tie };

inline std::string to_label(Verdict v) {
    switch (v) {
        case Verdict::Completed:                return "completed";
        case Verdict::AbortedChannelCheck:      return "aborted_channel_check";
        case Verdict::AbortedPostConfirmation:  return "aborted_post_confirmation";
        case Verdict::Tie:                      return "tie";
    }
    throw std::invalid_argument("unknown verdict");
}

enum class TiePolicy { Abort, LowestId };

struct DetectionEvent {
    std::string edge;  // e.g. "s2:Bob", "s5:Bob->Charlie", "s6:Bob"
    bool tapped = false;
    std::size_t decoys = 0;
    std::size_t mismatches = 0;
    double error_rate = 0.0;
    bool pass = true;
};

struct CollusionGuess {
    int colluder = 0;
    int target = 0;
    Bid guess;
    bool correct = false;
};

struct AuctionOutcome {
    Verdict verdict = Verdict::Completed;
    std::optional<int> winner;
    std::optional<Bid> announced_bid;
    std::map<int, Bid> decoded_bids;
    std::vector<DetectionEvent> detections;
    std::map<int, bool> post_confirmations;  // verifier id -> pass
    std::vector<CollusionGuess> collusion_guesses;
    std::size_t decoded_bits = 0;
    std::size_t decode_bit_errors = 0;  // decoded vs true bids
};

struct AttackPlan {
    AttackKind kind = AttackKind::None;
    BasisPolicy policy = BasisPolicy::UniformXY;
    std::string edge = "s2";  // "s2" | "s5" | "s6": which transmission is tapped
    int target = 1;           // tapped / spied-on bidder
    std::optional<Bid> fabricated_bid;
    std::optional<int> fabricated_winner;
    std::vector<int> colluders;
};

struct AuctionConfig {
    int n_parties = 3;        // N: one auctioneer + N-1 bidders
    std::size_t bid_length = 4;
    std::vector<Bid> bids;    // one per bidder, in id order
    DecoyPolicy decoy_policy;
    std::optional<std::size_t> decoy_override;  // explicit d per carrier sequence
    double error_threshold = 0.0;
    TiePolicy tie_policy = TiePolicy::Abort;
    AttackPlan attack;
    std::optional<std::vector<std::vector<CanonicalState>>> fixed_carriers;
    std::optional<std::vector<Permutation>> fixed_permutations;
    bool debug_registers = false;
};

// ---------------------------------------------------------------------------
// step-level operations
// ---------------------------------------------------------------------------

inline std::vector<CanonicalState> draw_carrier_states(std::size_t m, RngStream& rng) {
    if (m < 2 || m % 2 != 0) {
        throw std::invalid_argument("carrier length must be even and >= 2");
    }
    std::vector<CanonicalState> states;
    states.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        states.push_back(kCarrierStates[rng.uniform_int(kCarrierStates.size())]);
    }
    return states;
}

inline CarrierSequence prepare_carriers(QuantumWorld& world, int owner,
                                        const std::vector<CanonicalState>& states) {
    for (const CanonicalState s : states) {
        if (basis_of(s) == Basis::Y) {
            throw std::invalid_argument("carrier states never use the Y basis");
        }
    }
    CarrierSequence seq;
    seq.owner = owner;
    seq.initial_states = states;
    seq.slots.reserve(states.size());
    for (const CanonicalState s : states) seq.slots.push_back(world.add_qubit(s));
    return seq;
}

inline CarrierSequence prepare_carriers(QuantumWorld& world, int owner,
                                        std::size_t m, RngStream& rng) {
    return prepare_carriers(world, owner, draw_carrier_states(m, rng));
}

struct AugmentedSequence {
    std::vector<Slot> slots;  // data + decoys, transmission order
    std::vector<DecoyRecord> records;
};

// Insert d fresh decoy qubits at uniformly random distinct positions. The
// relative order of the data qubits is unchanged.
inline AugmentedSequence insert_decoys(QuantumWorld& world,
                                       const std::vector<Slot>& data,
                                       std::size_t d, RngStream& rng) {
    if (d < 1) throw std::invalid_argument("at least one decoy is required");
    const std::size_t total = data.size() + d;
    std::vector<std::size_t> positions(total);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    rng.shuffle(positions);
    positions.resize(d);
    std::sort(positions.begin(), positions.end());

    AugmentedSequence out;
    out.slots.resize(total);
    std::vector<bool> is_decoy(total, false);
    for (const std::size_t p : positions) is_decoy[p] = true;

    std::size_t next_data = 0;
    for (std::size_t p = 0; p < total; ++p) {
        if (is_decoy[p]) {
            const CanonicalState s = kDecoyStates[rng.uniform_int(kDecoyStates.size())];
            const Slot slot = world.add_qubit(s);
            out.slots[p] = slot;
            out.records.push_back({p, s, basis_of(s), slot});
        } else {
            out.slots[p] = data[next_data++];
        }
    }
    return out;
}

struct CheckResult {
    std::size_t decoys = 0;
    std::size_t mismatches = 0;
    double error_rate = 0.0;
    bool pass = true;
    std::vector<int> outcomes;  // published measurement results, in record order
};

// The receiver measures each decoy in the announced basis; outcomes are
// compared against the prepared eigenstates.
inline CheckResult run_decoy_check(QuantumWorld& world,
                                   const std::vector<DecoyRecord>& records,
                                   double threshold, RngStream& rng) {
    if (records.empty()) {
        throw std::invalid_argument("decoy check requires at least one decoy");
    }
    CheckResult r;
    r.decoys = records.size();
    for (const DecoyRecord& rec : records) {
        const int outcome = world.measure(rec.slot, rec.basis, rng);
        r.outcomes.push_back(outcome);
        if (outcome != eigen_index(rec.state)) ++r.mismatches;
    }
    r.error_rate = static_cast<double>(r.mismatches) / static_cast<double>(r.decoys);
    r.pass = r.error_rate <= threshold;
    return r;
}

// Step 4 rule: bit 0 -> I, bit 1 -> i*sigma_y, qubit-wise.
inline void encode_bid(QuantumWorld& world, const CarrierSequence& seq, const Bid& bid) {
    if (bid.length() != seq.slots.size()) {
        throw std::invalid_argument("bid length must match carrier count");
    }
    for (std::size_t i = 0; i < seq.slots.size(); ++i) {
        if (bid.bit(i) == 1) world.apply_single(Gate::i_sigma_y(), seq.slots[i]);
    }
}

// Register-level variant used by exhaustive tests.
inline StateVector encode_bid(StateVector sv, const Bid& bid) {
    if (bid.length() != sv.n_qubits()) {
        throw std::invalid_argument("bid length must match register size");
    }
    for (std::size_t i = 0; i < bid.length(); ++i) {
        if (bid.bit(i) == 1) sv = apply_single(sv, Gate::i_sigma_y(), i);
    }
    return sv;
}

// Step 6 rule: measure each qubit in its preparation basis; the bit is 1 iff
// the outcome differs from the prepared eigenstate.
inline Bid decode_bid(QuantumWorld& world,
                      const std::vector<CanonicalState>& initial_states,
                      const std::vector<Slot>& slots, RngStream& rng) {
    if (initial_states.size() != slots.size()) {
        throw std::invalid_argument("initial state count must match qubit count");
    }
    std::string bits;
    bits.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const int outcome = world.measure(slots[i], basis_of(initial_states[i]), rng);
        bits += (outcome != eigen_index(initial_states[i])) ? '1' : '0';
    }
    return Bid(bits);
}

inline Bid decode_bid(const std::vector<CanonicalState>& initial_states,
                      const StateVector& sv, RngStream& rng) {
    if (initial_states.size() != sv.n_qubits()) {
        throw std::invalid_argument("initial state count must match register size");
    }
    std::string bits;
    StateVector cur = sv;
    for (std::size_t i = 0; i < initial_states.size(); ++i) {
        auto r = measure(cur, i, basis_of(initial_states[i]), rng);
        cur = std::move(r.state);
        bits += (r.outcome != eigen_index(initial_states[i])) ? '1' : '0';
    }
    return Bid(bits);
}

// Step 5 code table: consecutive 2-bit chunks, 00/01/10/11 -> psi+/psi-/phi+/phi-.
inline std::vector<BellLabel> epr_encode_bid(const Bid& bid) {
    if (bid.length() % 2 != 0) {
        throw std::invalid_argument("bid length must be even");
    }
    std::vector<BellLabel> labels;
    labels.reserve(bid.length() / 2);
    for (std::size_t g = 0; g < bid.length(); g += 2) {
        labels.push_back(bell_from_code(bid.bits().substr(g, 2)));
    }
    return labels;
}

inline Bid epr_decode_labels(const std::vector<BellLabel>& labels) {
    std::string bits;
    for (const BellLabel l : labels) bits += bell_code(l);
    return Bid(bits);
}

// Reorder a slot list: the qubit at source position perm.map[i] moves to
// position i (same convention as apply_permutation on amplitudes).
inline std::vector<Slot> permute_slots(const std::vector<Slot>& slots,
                                       const Permutation& perm) {
    perm.validate();
    if (perm.size() != slots.size()) {
        throw std::invalid_argument("permutation length must equal sequence length");
    }
    std::vector<Slot> out(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) out[i] = slots[perm.map[i]];
    return out;
}

struct WinnerResult {
    std::optional<int> winner;
    Bid highest;
    bool tie = false;
};

inline WinnerResult determine_winner(const std::map<int, Bid>& decoded,
                                     TiePolicy policy) {
    if (decoded.empty()) throw std::invalid_argument("no bids to compare");
    WinnerResult r;
    std::uint64_t best = 0;
    bool first = true;
    std::size_t holders = 0;
    for (const auto& [id, bid] : decoded) {
        const std::uint64_t v = bid.value();
        if (first || v > best) {
            best = v;
            r.winner = id;
            r.highest = bid;
            holders = 1;
            first = false;
        } else if (v == best) {
            ++holders;
        }
    }
    if (holders > 1) {
        if (policy == TiePolicy::Abort) {
            r.tie = true;
            r.winner.reset();
        }
        // LowestId: std::map iteration already visited the smallest id first
    }
    return r;
}

// One verifier's Step 7 check: undo the revealed permutation, Bell-measure
// consecutive pairs, compare the recovered bid with the announcement.
inline bool post_confirm_verify(QuantumWorld& world, const EprSequence& held,
                                const Permutation& revealed, const Bid& announced,
                                RngStream& rng, Bid* recovered_out = nullptr) {
    if (revealed.size() != held.slots.size()) {
        throw std::invalid_argument("permutation length mismatch in post-confirmation");
    }
    const std::vector<Slot> ordered = permute_slots(held.slots, invert(revealed));
    std::string bits;
    for (std::size_t g = 0; g + 1 < ordered.size(); g += 2) {
        bits += bell_code(world.bell_measure(ordered[g], ordered[g + 1], rng));
    }
    const Bid recovered(bits);
    if (recovered_out != nullptr) *recovered_out = recovered;
    return recovered == announced;
}

// ---------------------------------------------------------------------------
// full protocol run
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json positions_json(const std::vector<DecoyRecord>& records) {
    nlohmann::json positions = nlohmann::json::array();
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& r : records) {
        positions.push_back(r.position);
        bases.push_back(to_label(r.basis));
    }
    return nlohmann::json{{"positions", positions}, {"bases", bases}};
}

} // namespace detail

inline void validate_config(const AuctionConfig& cfg) {
    if (cfg.n_parties < 3) {
        throw std::invalid_argument("n_parties must be at least 3");
    }
    if (cfg.bid_length < 2 || cfg.bid_length % 2 != 0) {
        throw std::invalid_argument("bid_length must be even and >= 2");
    }
    if (cfg.bids.size() != static_cast<std::size_t>(cfg.n_parties - 1)) {
        throw std::invalid_argument("expected one bid per bidder");
    }
    for (const Bid& b : cfg.bids) {
        if (b.length() != cfg.bid_length) {
            throw std::invalid_argument("bid length mismatch");
        }
    }
    if (cfg.decoy_policy.rate_k <= 0.0 || cfg.decoy_policy.rate_k > 1.0) {
        throw std::invalid_argument("decoy rate must be in (0, 1]");
    }
    if (cfg.fixed_carriers &&
        cfg.fixed_carriers->size() != cfg.bids.size()) {
        throw std::invalid_argument("fixed carriers must cover every bidder");
    }
    if (cfg.fixed_permutations &&
        cfg.fixed_permutations->size() != cfg.bids.size()) {
        throw std::invalid_argument("fixed permutations must cover every bidder");
    }
    if (cfg.attack.kind == AttackKind::FalseAnnouncement && !cfg.attack.fabricated_bid) {
        throw std::invalid_argument("false announcement needs a fabricated bid");
    }
    if (cfg.attack.kind != AttackKind::None) {
        if (cfg.attack.target < 1 || cfg.attack.target >= cfg.n_parties) {
            throw std::invalid_argument("attack target must be a bidder id");
        }
    }
}

struct AuctionResult {
    AuctionOutcome outcome;
    Transcript transcript;
};

inline AuctionResult run_auction(const AuctionConfig& cfg, RngStream& rng) {
    validate_config(cfg);

    AuctionResult result;
    AuctionOutcome& out = result.outcome;
    Transcript& t = result.transcript;
    QuantumWorld world;

    const int n_bidders = cfg.n_parties - 1;
    const std::size_t m = cfg.bid_length;
    const std::size_t carrier_decoys =
        cfg.decoy_override.value_or(cfg.decoy_policy.decoys_for(m));

    RngStream tap_rng = rng.child(0x7A9);
    RngStream collusion_rng = rng.child(0xC01);
    std::unique_ptr<ChannelTap> tap =
        make_tap(cfg.attack.kind, cfg.attack.policy);
    const bool channel_attack = cfg.attack.kind == AttackKind::CnotAncilla ||
                                cfg.attack.kind == AttackKind::InterceptResend;

    const auto abort_channel = [&](const std::string& step) {
        t.record(step, "verdict", "Alice", "all",
                 {{"verdict", to_label(Verdict::AbortedChannelCheck)}});
        out.verdict = Verdict::AbortedChannelCheck;
    };

    // Step 1: agree on the encoding operations and the Bell code table.
    t.record("S1", "announce", "Alice", "all",
             {{"n_parties", cfg.n_parties},
              {"bid_length", m},
              {"encoding", {{"0", "I"}, {"1", "i_sigma_y"}}},
              {"bell_codes",
               {{"00", "psi+"}, {"01", "psi-"}, {"10", "phi+"}, {"11", "phi-"}}}});

    // Step 2: Alice prepares carrier sequences, inserts decoys, sends.
    std::vector<CarrierSequence> carriers;
    std::vector<std::vector<DecoyRecord>> s2_decoys;
    for (int j = 1; j <= n_bidders; ++j) {
        CarrierSequence seq =
            cfg.fixed_carriers
                ? prepare_carriers(world, j, (*cfg.fixed_carriers)[j - 1])
                : prepare_carriers(world, j, m, rng);
        AugmentedSequence aug = insert_decoys(world, seq.slots, carrier_decoys, rng);
        nlohmann::json payload{{"carriers", m}, {"decoys", carrier_decoys}};
        if (cfg.debug_registers) {
            nlohmann::json labels = nlohmann::json::array();
            for (const CanonicalState s : seq.initial_states) labels.push_back(to_label(s));
            payload["carrier_states"] = labels;
        }
        t.record("S2", "qsend", "Alice", party_name(j), payload);
        if (channel_attack && cfg.attack.edge == "s2" && j == cfg.attack.target) {
            tap->on_transmit(world, aug.slots, tap_rng);
        }
        carriers.push_back(std::move(seq));
        s2_decoys.push_back(std::move(aug.records));
    }

    // Step 3: eavesdropper checking, per bidder.
    for (int j = 1; j <= n_bidders; ++j) {
        const auto& records = s2_decoys[j - 1];
        t.record("S3", "announce", "Alice", party_name(j),
                 detail::positions_json(records));
        CheckResult chk = run_decoy_check(world, records, cfg.error_threshold, rng);
        t.record("S3", "announce", party_name(j), "Alice",
                 {{"outcomes", chk.outcomes}});
        t.record("S3", "check", "Alice", party_name(j),
                 {{"decoys", chk.decoys},
                  {"mismatches", chk.mismatches},
                  {"error_rate", chk.error_rate},
                  {"pass", chk.pass}});
        out.detections.push_back({"s2:" + party_name(j),
                                  channel_attack && cfg.attack.edge == "s2" &&
                                      j == cfg.attack.target,
                                  chk.decoys, chk.mismatches, chk.error_rate,
                                  chk.pass});
        if (!chk.pass) {
            abort_channel("S3");
            return result;
        }
    }

    // Step 4: bidders encode their bids (local operations).
    for (int j = 1; j <= n_bidders; ++j) {
        encode_bid(world, carriers[j - 1], cfg.bids[j - 1]);
    }

    // Step 5: EPR post-confirmation sequences, permuted and decoy-checked.
    std::vector<Permutation> perms;
    for (int j = 1; j <= n_bidders; ++j) {
        perms.push_back(cfg.fixed_permutations ? (*cfg.fixed_permutations)[j - 1]
                                               : Permutation::random(m, rng));
    }
    // held[i][j] = the copy of bidder j's sequence held by bidder i
    std::map<int, std::map<int, EprSequence>> held;
    for (int j = 1; j <= n_bidders; ++j) {
        const std::vector<BellLabel> labels = epr_encode_bid(cfg.bids[j - 1]);
        for (int i = 1; i <= n_bidders; ++i) {
            if (i == j) continue;
            EprSequence seq;
            seq.owner = j;
            seq.target = i;
            seq.labels = labels;
            seq.perm = perms[j - 1];
            std::vector<Slot> data;
            for (const BellLabel l : labels) {
                const auto [a, b] = world.add_bell_pair(l);
                data.push_back(a);
                data.push_back(b);
            }
            seq.slots = permute_slots(data, seq.perm);
            AugmentedSequence aug = insert_decoys(world, seq.slots, m, rng);
            t.record("S5", "qsend", party_name(j), party_name(i),
                     {{"epr_qubits", m}, {"decoys", m}});
            if (channel_attack && cfg.attack.edge == "s5" && j == cfg.attack.target) {
                tap->on_transmit(world, aug.slots, tap_rng);
            }
            t.record("S5", "announce", party_name(j), party_name(i),
                     detail::positions_json(aug.records));
            CheckResult chk =
                run_decoy_check(world, aug.records, cfg.error_threshold, rng);
            t.record("S5", "announce", party_name(i), party_name(j),
                     {{"outcomes", chk.outcomes}});
            t.record("S5", "check", party_name(j), party_name(i),
                     {{"decoys", chk.decoys},
                      {"mismatches", chk.mismatches},
                      {"error_rate", chk.error_rate},
                      {"pass", chk.pass}});
            out.detections.push_back(
                {"s5:" + party_name(j) + "->" + party_name(i),
                 channel_attack && cfg.attack.edge == "s5" && j == cfg.attack.target,
                 chk.decoys, chk.mismatches, chk.error_rate, chk.pass});
            if (!chk.pass) {
                abort_channel("S5");
                return result;
            }
            held[i].emplace(j, std::move(seq));
        }
    }

    // Colluding bidders measure their held copies of the target's sequence
    // without knowing the permutation.
    if (cfg.attack.kind == AttackKind::Collusion) {
        for (const int c : cfg.attack.colluders) {
            if (c == cfg.attack.target) continue;
            const auto it_c = held.find(c);
            if (it_c == held.end()) continue;
            const auto it_seq = it_c->second.find(cfg.attack.target);
            if (it_seq == it_c->second.end()) continue;
            const Bid guess = collusion_measure_disordered(
                world, it_seq->second.slots, collusion_rng);
            out.collusion_guesses.push_back(
                {c, cfg.attack.target, guess,
                 guess == cfg.bids[cfg.attack.target - 1]});
        }
    }

    // Step 6: bidders return the encoded carriers behind fresh decoys; Alice
    // checks, measures in the preparation bases, and announces the winner.
    for (int j = 1; j <= n_bidders; ++j) {
        AugmentedSequence aug =
            insert_decoys(world, carriers[j - 1].slots, carrier_decoys, rng);
        nlohmann::json payload{{"carriers", m}, {"decoys", carrier_decoys}};
        if (cfg.debug_registers) {
            // an attacked register can be entangled with adversary ancillas,
            // in which case it has no pure statevector of its own
            payload["register"] = world.peek_closed(carriers[j - 1].slots)
                                      ? state_to_json(world.peek(carriers[j - 1].slots))
                                      : nlohmann::json("entangled");
        }
        t.record("S6", "qsend", party_name(j), "Alice", payload);
        if (channel_attack && cfg.attack.edge == "s6" && j == cfg.attack.target) {
            tap->on_transmit(world, aug.slots, tap_rng);
        }
        t.record("S6", "announce", party_name(j), "Alice",
                 detail::positions_json(aug.records));
        CheckResult chk = run_decoy_check(world, aug.records, cfg.error_threshold, rng);
        t.record("S6", "announce", "Alice", party_name(j),
                 {{"outcomes", chk.outcomes}});
        t.record("S6", "check", party_name(j), "Alice",
                 {{"decoys", chk.decoys},
                  {"mismatches", chk.mismatches},
                  {"error_rate", chk.error_rate},
                  {"pass", chk.pass}});
        out.detections.push_back({"s6:" + party_name(j),
                                  channel_attack && cfg.attack.edge == "s6" &&
                                      j == cfg.attack.target,
                                  chk.decoys, chk.mismatches, chk.error_rate,
                                  chk.pass});
        if (!chk.pass) {
            abort_channel("S6");
            return result;
        }
        const Bid decoded =
            decode_bid(world, carriers[j - 1].initial_states, carriers[j - 1].slots, rng);
        for (std::size_t k = 0; k < m; ++k) {
            out.decoded_bits += 1;
            out.decode_bit_errors += decoded.bit(k) != cfg.bids[j - 1].bit(k);
        }
        out.decoded_bids.emplace(j, decoded);
    }

    const WinnerResult win = determine_winner(out.decoded_bids, cfg.tie_policy);
    if (win.tie) {
        t.record("S6", "verdict", "Alice", "all", {{"verdict", to_label(Verdict::Tie)}});
        out.verdict = Verdict::Tie;
        return result;
    }

    int announced_winner = *win.winner;
    Bid announced_bid = win.highest;
    if (cfg.attack.kind == AttackKind::FalseAnnouncement) {
        announced_winner = cfg.attack.fabricated_winner.value_or(announced_winner);
        announced_bid = *cfg.attack.fabricated_bid;
    }
    out.winner = announced_winner;
    out.announced_bid = announced_bid;
    t.record("S6", "announce", "Alice", "all",
             {{"winner", party_name(announced_winner)},
              {"bid", announced_bid.bits()}});

    // Step 7: the announced winner reveals the permutation; every other
    // bidder verifies the announced bid against the held EPR copy.
    const Permutation& revealed = perms[announced_winner - 1];
    t.record("S7", "announce", party_name(announced_winner), "all",
             {{"order", revealed.to_order_string()}});
    bool all_pass = true;
    for (int i = 1; i <= n_bidders; ++i) {
        if (i == announced_winner) continue;
        const auto it = held[i].find(announced_winner);
        if (it == held[i].end()) continue;
        Bid recovered;
        const bool ok = post_confirm_verify(world, it->second, revealed,
                                            announced_bid, rng, &recovered);
        out.post_confirmations.emplace(i, ok);
        all_pass = all_pass && ok;
        t.record("S7", "check", party_name(i), "all",
                 {{"recovered", recovered.bits()},
                  {"announced", announced_bid.bits()},
                  {"pass", ok}});
    }
    std::size_t discarded = 0;
    for (int j = 1; j <= n_bidders; ++j) {
        if (j != announced_winner) discarded += static_cast<std::size_t>(n_bidders - 1);
    }
    t.record("S7", "announce", "all", "all",
             {{"note", "unused epr sequences discarded"}, {"count", discarded}});

    out.verdict = all_pass ? Verdict::Completed : Verdict::AbortedPostConfirmation;
    nlohmann::json verdict_payload{{"verdict", to_label(out.verdict)}};
    if (out.verdict == Verdict::Completed) {
        verdict_payload["winner"] = party_name(announced_winner);
        verdict_payload["bid"] = announced_bid.bits();
    }
    t.record("S7", "verdict", "Alice", "all", verdict_payload);
    return result;
}

} // namespace qsa
