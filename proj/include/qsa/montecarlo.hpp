// montecarlo.hpp
// Seeded trial execution and statistics aggregation. Trials use a counter
// construction for per-trial seeds, so any single trial replays on its own.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "qsa/protocol.hpp"
#include "qsa/scenario.hpp"
#include "qsa/transcript.hpp"

namespace qsa {

struct RateWithCI {
    std::size_t successes = 0;
    std::size_t n = 0;
    double rate = 0.0;
    double lo = 0.0;  // 99% Wilson interval
    double hi = 0.0;
};

inline RateWithCI binomial_rate_ci99(std::size_t successes, std::size_t n) {
    RateWithCI r;
    r.successes = successes;
    r.n = n;
    if (n == 0) return r;
    const double z = 2.5758293035489004;  // 99.5th percentile of N(0,1)
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    r.rate = p;
    r.lo = std::max(0.0, center - half);
    r.hi = std::min(1.0, center + half);
    return r;
}

struct RunStatistics {
    std::uint64_t seed = 0;
    std::uint64_t scenario_digest = 0;
    std::size_t trials = 0;
    std::size_t completions = 0;
    std::size_t channel_aborts = 0;
    std::size_t postconf_aborts = 0;
    std::size_t ties = 0;

    // detection of the configured attack (channel aborts for taps,
    // post-confirmation failures for false announcements)
    RateWithCI detection;

    // per-decoy mismatch rate on tapped transmissions
    RateWithCI per_decoy;

    // decoded bits vs true bids over runs that reached decoding
    RateWithCI decode_errors;

    // collusion guessing
    RateWithCI collusion_success;

    // resource accounting (sums over all trials)
    std::size_t carrier_qubits = 0;  // message carriers prepared
    std::size_t decoy_qubits = 0;    // every decoy photon on every edge
    std::size_t epr_qubits = 0;      // post-confirmation EPR qubits transmitted
    std::size_t bid_cbits = 0;       // bid bits conveyed by completed runs
    double xi_mean = 0.0;            // carrier qubits per bid cbit, completed runs
};

// Resource counts read back from a transcript: carriers from S2 sends, decoys
// from every send, EPR qubits from S5 sends.
struct ResourceCount {
    std::size_t carriers = 0;
    std::size_t decoys = 0;
    std::size_t epr = 0;
};

inline ResourceCount count_resources(const Transcript& t) {
    ResourceCount rc;
    for (const auto& e : t.events()) {
        if (e.kind != "qsend") continue;
        if (e.step == "S2") rc.carriers += e.payload.at("carriers").get<std::size_t>();
        if (e.step == "S5") rc.epr += e.payload.at("epr_qubits").get<std::size_t>();
        rc.decoys += e.payload.value("decoys", std::size_t{0});
    }
    return rc;
}

inline RunStatistics run_trials(const Scenario& scenario, std::size_t trials) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    RunStatistics st;
    st.seed = scenario.seed;
    st.scenario_digest = scenario_hash(scenario);
    st.trials = trials;

    std::size_t detections = 0, detection_trials = 0;
    std::size_t tapped_decoys = 0, tapped_mismatches = 0;
    std::size_t decoded_bits = 0, decode_bit_errors = 0;
    std::size_t guesses = 0, guess_hits = 0;
    double xi_sum = 0.0;
    std::size_t xi_runs = 0;

    for (std::size_t k = 0; k < trials; ++k) {
        RngStream trial_rng(derive_seed(scenario.seed, k));
        const AuctionConfig cfg = make_auction_config(scenario, trial_rng);
        AuctionResult res = run_auction(cfg, trial_rng);

        switch (res.outcome.verdict) {
            case Verdict::Completed:               ++st.completions; break;
            case Verdict::AbortedChannelCheck:     ++st.channel_aborts; break;
            case Verdict::AbortedPostConfirmation: ++st.postconf_aborts; break;
            case Verdict::Tie:                     ++st.ties; break;
        }

        switch (scenario.attack.kind) {
            case AttackKind::CnotAncilla:
            case AttackKind::InterceptResend:
                ++detection_trials;
                detections += res.outcome.verdict == Verdict::AbortedChannelCheck;
                break;
            case AttackKind::FalseAnnouncement:
                if (res.outcome.verdict != Verdict::Tie &&
                    res.outcome.verdict != Verdict::AbortedChannelCheck) {
                    ++detection_trials;
                    detections +=
                        res.outcome.verdict == Verdict::AbortedPostConfirmation;
                }
                break;
            default:
                break;
        }

        for (const DetectionEvent& d : res.outcome.detections) {
            if (!d.tapped) continue;
            tapped_decoys += d.decoys;
            tapped_mismatches += d.mismatches;
        }
        decoded_bits += res.outcome.decoded_bits;
        decode_bit_errors += res.outcome.decode_bit_errors;
        for (const CollusionGuess& g : res.outcome.collusion_guesses) {
            ++guesses;
            guess_hits += g.correct;
        }

        const ResourceCount rc = count_resources(res.transcript);
        st.decoy_qubits += rc.decoys;
        st.epr_qubits += rc.epr;
        st.carrier_qubits += rc.carriers;
        if (res.outcome.verdict == Verdict::Completed) {
            const std::size_t cbits =
                cfg.bid_length * static_cast<std::size_t>(cfg.n_parties - 1);
            st.bid_cbits += cbits;
            xi_sum += static_cast<double>(rc.carriers) / static_cast<double>(cbits);
            ++xi_runs;
        }
    }

    st.detection = binomial_rate_ci99(detections, detection_trials);
    st.per_decoy = binomial_rate_ci99(tapped_mismatches, tapped_decoys);
    st.decode_errors = binomial_rate_ci99(decode_bit_errors, decoded_bits);
    st.collusion_success = binomial_rate_ci99(guess_hits, guesses);
    st.xi_mean = xi_runs ? xi_sum / static_cast<double>(xi_runs) : 0.0;
    return st;
}

} // namespace qsa
