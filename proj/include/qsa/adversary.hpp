// adversary.hpp
// Channel taps and dishonest-party behaviors, plus closed-form detection
// oracles. A tap acts only on qubits in transit; it never sees decoy
// positions or bases (those are announced after receipt).

#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsa/bid.hpp"
#include "qsa/rng.hpp"
#include "qsa/statevector.hpp"
#include "qsa/states.hpp"
#include "qsa/world.hpp"

namespace qsa {

enum class AttackKind {
    None,
    InterceptResend,
    CnotAncilla,
    FalseAnnouncement,
    Collusion,
};

inline std::string to_label(AttackKind k) {
    switch (k) {
        case AttackKind::None:              return "none";
        case AttackKind::InterceptResend:   return "intercept_resend";
        case AttackKind::CnotAncilla:       return "cnot";
        case AttackKind::FalseAnnouncement: return "false_announcement";
        case AttackKind::Collusion:         return "collusion";
    }
    throw std::invalid_argument("unknown attack kind");
}

inline AttackKind attack_from_label(std::string_view s) {
    if (s == "none") return AttackKind::None;
    if (s == "intercept_resend") return AttackKind::InterceptResend;
    if (s == "cnot") return AttackKind::CnotAncilla;
    if (s == "false_announcement") return AttackKind::FalseAnnouncement;
    if (s == "collusion") return AttackKind::Collusion;
    throw std::invalid_argument("unknown attack: " + std::string(s));
}

// Eve's measurement-basis strategy for intercept-and-resend.
enum class BasisPolicy { FixedZ, FixedX, UniformXY, UniformZXY };

inline std::string to_label(BasisPolicy p) {
    switch (p) {
        case BasisPolicy::FixedZ:     return "fixed_z";
        case BasisPolicy::FixedX:     return "fixed_x";
        case BasisPolicy::UniformXY:  return "uniform_xy";
        case BasisPolicy::UniformZXY: return "uniform_zxy";
    }
    throw std::invalid_argument("unknown basis policy");
}

inline BasisPolicy basis_policy_from_label(std::string_view s) {
    if (s == "fixed_z") return BasisPolicy::FixedZ;
    if (s == "fixed_x") return BasisPolicy::FixedX;
    if (s == "uniform_xy") return BasisPolicy::UniformXY;
    if (s == "uniform_zxy") return BasisPolicy::UniformZXY;
    throw std::invalid_argument("unknown basis policy: " + std::string(s));
}

// Weighted basis choices of a policy, for both sampling and enumeration.
inline std::vector<std::pair<Basis, double>> policy_bases(BasisPolicy p) {
    switch (p) {
        case BasisPolicy::FixedZ: return {{Basis::Z, 1.0}};
        case BasisPolicy::FixedX: return {{Basis::X, 1.0}};
        case BasisPolicy::UniformXY:
            return {{Basis::X, 0.5}, {Basis::Y, 0.5}};
        case BasisPolicy::UniformZXY:
            return {{Basis::Z, 1.0 / 3}, {Basis::X, 1.0 / 3}, {Basis::Y, 1.0 / 3}};
    }
    throw std::invalid_argument("unknown basis policy");
}

class ChannelTap {
public:
    virtual ~ChannelTap() = default;
    virtual std::string name() const = 0;
    // called once per quantum transmission with every slot in transit
    virtual void on_transmit(QuantumWorld& world, const std::vector<Slot>& slots,
                             RngStream& rng) = 0;
};

class PassThroughTap final : public ChannelTap {
public:
    std::string name() const override { return "pass_through"; }
    void on_transmit(QuantumWorld&, const std::vector<Slot>&, RngStream&) override {}
};

// Measures every transiting qubit in a policy-drawn basis and forwards the
// collapsed state.
class InterceptResendTap final : public ChannelTap {
public:
    struct Note {
        Slot slot;
        Basis basis;
        int outcome;
    };

    explicit InterceptResendTap(BasisPolicy policy) : policy_(policy) {}

    std::string name() const override { return "intercept_resend"; }

    void on_transmit(QuantumWorld& world, const std::vector<Slot>& slots,
                     RngStream& rng) override {
        const auto bases = policy_bases(policy_);
        for (const Slot s : slots) {
            Basis b = bases.front().first;
            if (bases.size() > 1) {
                b = bases[rng.uniform_int(bases.size())].first;
            }
            const int outcome = world.measure(s, b, rng);
            notes_.push_back({s, b, outcome});
        }
    }

    const std::vector<Note>& notes() const { return notes_; }

private:
    BasisPolicy policy_;
    std::vector<Note> notes_;
};

// Entangles every transiting qubit (control) with a fresh |0> ancilla
// (target) and keeps the ancillas.
class CnotAncillaTap final : public ChannelTap {
public:
    std::string name() const override { return "cnot"; }

    void on_transmit(QuantumWorld& world, const std::vector<Slot>& slots,
                     RngStream&) override {
        for (const Slot s : slots) {
            const Slot anc = world.add_qubit(CanonicalState::Zero);
            world.apply_cnot(s, anc);
            ancillas_.push_back(anc);
        }
    }

    const std::vector<Slot>& ancillas() const { return ancillas_; }

private:
    std::vector<Slot> ancillas_;
};

inline std::unique_ptr<ChannelTap> make_tap(AttackKind kind, BasisPolicy policy) {
    switch (kind) {
        case AttackKind::InterceptResend:
            return std::make_unique<InterceptResendTap>(policy);
        case AttackKind::CnotAncilla:
            return std::make_unique<CnotAncillaTap>();
        default:
            return std::make_unique<PassThroughTap>();
    }
}

// Colluders who hold a permuted EPR register but not the permutation:
// Bell-measure adjacent positions and decode the concatenated codes.
inline Bid collusion_measure_disordered(QuantumWorld& world,
                                        const std::vector<Slot>& permuted_slots,
                                        RngStream& rng) {
    if (permuted_slots.size() % 2 != 0) {
        throw std::invalid_argument("EPR register length must be even");
    }
    std::string bits;
    for (std::size_t g = 0; g + 1 < permuted_slots.size(); g += 2) {
        const BellLabel l =
            world.bell_measure(permuted_slots[g], permuted_slots[g + 1], rng);
        bits += bell_code(l);
    }
    return Bid(bits);
}

// Per-decoy detection probability of a channel attack, by exhaustive
// enumeration over the four decoy states and the adversary's choices with
// exact Born probabilities (no sampling).
inline double per_decoy_detection_probability(AttackKind kind, BasisPolicy policy) {
    if (kind == AttackKind::None) return 0.0;
    if (kind == AttackKind::CnotAncilla) {
        double mismatch = 0.0;
        for (const CanonicalState decoy : kDecoyStates) {
            const auto joint =
                apply_cnot(from_states({decoy, CanonicalState::Zero}), 0, 1);
            const double correct =
                measure_probability(joint, 0, basis_of(decoy), eigen_index(decoy));
            mismatch += (1.0 - correct) / kDecoyStates.size();
        }
        return mismatch;
    }
    if (kind == AttackKind::InterceptResend) {
        double mismatch = 0.0;
        for (const CanonicalState decoy : kDecoyStates) {
            const auto prepared = from_states({decoy});
            for (const auto& [eve_basis, weight] : policy_bases(policy)) {
                for (int e = 0; e < 2; ++e) {
                    const double p_e = measure_probability(prepared, 0, eve_basis, e);
                    if (p_e <= 0.0) continue;
                    const auto forwarded = from_states({basis_eigenstate(eve_basis, e)});
                    const double correct = measure_probability(
                        forwarded, 0, basis_of(decoy), eigen_index(decoy));
                    mismatch += weight * p_e * (1.0 - correct) / kDecoyStates.size();
                }
            }
        }
        return mismatch;
    }
    throw std::invalid_argument("no per-decoy detection model for attack: " +
                                to_label(kind));
}

// Probability that a check over d independent decoys flags the attack.
inline double analytic_detection(AttackKind kind, BasisPolicy policy, std::size_t d) {
    const double p = per_decoy_detection_probability(kind, policy);
    return 1.0 - std::pow(1.0 - p, static_cast<double>(d));
}

} // namespace qsa
