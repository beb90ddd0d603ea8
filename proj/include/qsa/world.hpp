// world.hpp
// Qubit store for one protocol run. Qubits live in small independent factors
// (a factor is a StateVector over the qubits entangled together so far);
// gates and measurements merge factors only when an operation spans two of
// them. A run with per-qubit CNOT ancillas therefore stays at 2-4 qubit
// factors instead of one exponentially large register.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsa/permutation.hpp"
#include "qsa/rng.hpp"
#include "qsa/statevector.hpp"
#include "qsa/states.hpp"

namespace qsa {

using Slot = std::size_t;

class QuantumWorld {
public:
    Slot add_qubit(CanonicalState s) {
        const Slot slot = locate_.size();
        const auto a = state_amplitudes(s);
        factors_.push_back(Factor{StateVector(1, {a[0], a[1]}), {slot}});
        locate_.push_back({factors_.size() - 1, 0});
        return slot;
    }

    std::pair<Slot, Slot> add_bell_pair(BellLabel label) {
        const Slot first = locate_.size();
        const Slot second = first + 1;
        factors_.push_back(Factor{prepare_bell(label), {first, second}});
        locate_.push_back({factors_.size() - 1, 0});
        locate_.push_back({factors_.size() - 1, 1});
        return {first, second};
    }

    std::size_t n_slots() const { return locate_.size(); }

    void apply_single(const Gate& gate, Slot q) {
        const auto [f, k] = locate(q);
        factors_[f].state = qsa::apply_single(factors_[f].state, gate, k);
    }

    void apply_cnot(Slot control, Slot target) {
        if (control == target) {
            throw std::invalid_argument("apply_cnot: control equals target");
        }
        const std::size_t f = merge_if_needed(control, target);
        factors_[f].state = qsa::apply_cnot(factors_[f].state,
                                            locate(control).second,
                                            locate(target).second);
    }

    int measure(Slot q, Basis basis, RngStream& rng) {
        const auto [f, k] = locate(q);
        auto r = qsa::measure(factors_[f].state, k, basis, rng);
        factors_[f].state = std::move(r.state);
        return r.outcome;
    }

    BellLabel bell_measure(Slot a, Slot b, RngStream& rng) {
        if (a == b) throw std::invalid_argument("bell_measure: equal slots");
        const std::size_t f = merge_if_needed(a, b);
        auto r = qsa::bell_measure(factors_[f].state, locate(a).second,
                                   locate(b).second, rng);
        factors_[f].state = std::move(r.state);
        return r.label;
    }

    // True iff the requested slots' factors contain no other qubits, i.e.
    // the set is not entangled with anything outside it and peek is valid.
    bool peek_closed(const std::vector<Slot>& slots) const {
        if (slots.empty()) return false;
        std::vector<bool> requested(locate_.size(), false);
        std::size_t distinct = 0;
        for (const Slot s : slots) {
            if (s >= locate_.size()) return false;
            if (!requested[s]) ++distinct;
            requested[s] = true;
        }
        if (distinct != slots.size()) return false;
        for (const Slot s : slots) {
            for (const Slot other : factors_[locate_[s].first].slots) {
                if (!requested[other]) return false;
            }
        }
        return true;
    }

    // Joint pure state of the requested slots, qubits ordered as requested.
    // Requires that the slots' factors contain no other qubits (i.e. the
    // requested set is not entangled with anything outside it).
    StateVector peek(const std::vector<Slot>& slots) const {
        if (slots.empty()) throw std::invalid_argument("peek: no slots");
        std::vector<std::size_t> factor_order;
        std::vector<bool> requested(locate_.size(), false);
        for (const Slot s : slots) {
            check_slot(s);
            requested[s] = true;
        }
        for (const Slot s : slots) {
            const std::size_t f = locate(s).first;
            bool known = false;
            for (const std::size_t g : factor_order) known |= (g == f);
            if (!known) factor_order.push_back(f);
        }
        std::vector<Slot> concat;
        for (const std::size_t f : factor_order) {
            for (const Slot s : factors_[f].slots) {
                if (!requested[s]) {
                    throw std::invalid_argument(
                        "peek: slots are entangled with qubits outside the request");
                }
                concat.push_back(s);
            }
        }
        if (concat.size() != slots.size()) {
            throw std::invalid_argument("peek: duplicate slots in request");
        }

        StateVector joint = factors_[factor_order[0]].state;
        for (std::size_t k = 1; k < factor_order.size(); ++k) {
            joint = tensor(joint, factors_[factor_order[k]].state);
        }

        Permutation perm;
        perm.map.resize(slots.size());
        for (std::size_t i = 0; i < slots.size(); ++i) {
            std::size_t pos = 0;
            while (concat[pos] != slots[i]) ++pos;
            perm.map[i] = pos;
        }
        return apply_permutation(joint, perm);
    }

    std::size_t factor_size(Slot q) const { return factors_[locate(q).first].slots.size(); }

private:
    struct Factor {
        StateVector state;
        std::vector<Slot> slots;  // slot id of each qubit, in qubit order
    };

    std::pair<std::size_t, std::size_t> locate(Slot q) const {
        check_slot(q);
        return locate_[q];
    }

    void check_slot(Slot q) const {
        if (q >= locate_.size()) throw std::out_of_range("unknown slot");
    }

    std::size_t merge_if_needed(Slot a, Slot b) {
        const std::size_t fa = locate(a).first;
        const std::size_t fb = locate(b).first;
        if (fa == fb) return fa;
        Factor& A = factors_[fa];
        Factor& B = factors_[fb];
        A.state = tensor(A.state, B.state);
        for (std::size_t k = 0; k < B.slots.size(); ++k) {
            locate_[B.slots[k]] = {fa, A.slots.size() + k};
        }
        A.slots.insert(A.slots.end(), B.slots.begin(), B.slots.end());
        B.slots.clear();
        B.state = StateVector(1);
        return fa;
    }

    std::vector<Factor> factors_;
    std::vector<std::pair<std::size_t, std::size_t>> locate_;  // slot -> (factor, qubit)
};

} // namespace qsa
