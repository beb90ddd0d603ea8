// tools/qsa.cpp
// Command-line front end: scenario runs, attack sweeps, the built-in
// three-party worked example, and the consumption comparison table.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsa/qsa.hpp"

namespace {

using namespace qsa;

constexpr const char* kExample3Json = R"({
  "schema_version": 1,
  "n_parties": 3,
  "bid_length": 4,
  "bids": ["1011", "0111"],
  "decoy_rate": 0.5,
  "error_threshold": 0.0,
  "tie_policy": "abort",
  "seed": 42,
  "debug_registers": true,
  "fixed": {
    "carriers": ["0 1 + -", "+ 0 - 1"],
    "orders": ["1324", "4123"]
  }
})";

Scenario example3_scenario() {
    return parse_scenario(nlohmann::json::parse(kExample3Json));
}

void print_summary(const RunStatistics& st) {
    std::cout << "trials            " << st.trials << "\n"
              << "completions       " << st.completions << "\n"
              << "channel aborts    " << st.channel_aborts << "\n"
              << "postconf aborts   " << st.postconf_aborts << "\n"
              << "ties              " << st.ties << "\n";
    if (st.detection.n > 0) {
        std::printf("detection rate    %.6f  (99%% CI [%.6f, %.6f], n=%zu)\n",
                    st.detection.rate, st.detection.lo, st.detection.hi,
                    st.detection.n);
    }
    if (st.per_decoy.n > 0) {
        std::printf("per-decoy errors  %.6f  (99%% CI [%.6f, %.6f], n=%zu)\n",
                    st.per_decoy.rate, st.per_decoy.lo, st.per_decoy.hi,
                    st.per_decoy.n);
    }
    if (st.collusion_success.n > 0) {
        std::printf("collusion success %.6f  (99%% CI [%.6f, %.6f], n=%zu)\n",
                    st.collusion_success.rate, st.collusion_success.lo,
                    st.collusion_success.hi, st.collusion_success.n);
    }
    if (st.decode_errors.n > 0 && st.decode_errors.successes > 0) {
        std::printf("decode error rate %.6f  (n=%zu)\n", st.decode_errors.rate,
                    st.decode_errors.n);
    }
    if (st.completions > 0) {
        std::printf("xi (qubit/cbit)   %.6f\n", st.xi_mean);
    }
}

void write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + out_path);
    out << text;
}

int cmd_run(const std::string& scenario_path, std::size_t trials,
            std::optional<std::uint64_t> seed, const std::string& out_path,
            const std::string& format, const std::string& transcript_path) {
    Scenario s = load_scenario(scenario_path);
    if (seed) s.seed = *seed;

    const RunStatistics st = run_trials(s, trials);
    if (!out_path.empty()) {
        emit_report(st, format, out_path);
    } else if (format == "csv") {
        std::cout << stats_to_csv(st);
    } else {
        std::cout << stats_to_json(st).dump(2) << "\n";
    }
    if (!out_path.empty()) print_summary(st);

    if (!transcript_path.empty()) {
        RngStream trial_rng(derive_seed(s.seed, 0));
        const AuctionConfig cfg = make_auction_config(s, trial_rng);
        const auto res = run_auction(cfg, trial_rng);
        std::ofstream out(transcript_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write: " + transcript_path);
        out << res.transcript.to_ndjson();
    }
    return 0;
}

int cmd_attack(const std::string& scenario_path, const std::string& type,
               const std::string& basis_policy, int target,
               const std::string& edge, const std::string& fabricated_bid,
               int fabricated_winner, const std::vector<int>& colluders,
               const std::vector<std::size_t>& sweep, std::size_t trials,
               const std::string& out_path, const std::string& format) {
    Scenario s = load_scenario(scenario_path);
    s.attack.kind = attack_from_label(type);
    if (!basis_policy.empty()) s.attack.policy = basis_policy_from_label(basis_policy);
    if (target > 0) s.attack.target = target;
    if (!edge.empty()) s.attack.edge = edge;
    if (!fabricated_bid.empty()) s.attack.fabricated_bid = Bid(fabricated_bid);
    if (fabricated_winner > 0) s.attack.fabricated_winner = fabricated_winner;
    if (!colluders.empty()) s.attack.colluders = colluders;
    // re-validate the amended scenario through its canonical form
    s = parse_scenario(scenario_to_json(s));

    const bool channel_attack = s.attack.kind == AttackKind::CnotAncilla ||
                                s.attack.kind == AttackKind::InterceptResend;
    std::vector<std::size_t> decoy_counts = sweep;
    if (decoy_counts.empty()) {
        decoy_counts.push_back(s.decoy_count.value_or(
            DecoyPolicy{s.decoy_rate}.decoys_for(s.bid_length)));
    }

    nlohmann::json rows = nlohmann::json::array();
    std::printf("%-8s %-8s %-12s %-24s %-12s\n", "decoys", "trials", "detected",
                "rate [99% CI]", "analytic");
    for (const std::size_t d : decoy_counts) {
        Scenario sd = s;
        sd.decoy_count = d;
        const RunStatistics st = run_trials(sd, trials);
        const double analytic =
            channel_attack
                ? analytic_detection(s.attack.kind, s.attack.policy, d)
                : std::numeric_limits<double>::quiet_NaN();
        std::printf("%-8zu %-8zu %-12zu %.4f [%.4f, %.4f]  %s\n", d, trials,
                    st.detection.successes, st.detection.rate, st.detection.lo,
                    st.detection.hi,
                    channel_attack ? std::to_string(analytic).c_str() : "-");
        nlohmann::json row{{"decoys", d}, {"stats", stats_to_json(st)}};
        if (channel_attack) {
            row["analytic_detection"] = analytic;
            row["per_decoy_analytic"] =
                per_decoy_detection_probability(s.attack.kind, s.attack.policy);
        }
        rows.push_back(row);
        if (s.attack.kind == AttackKind::Collusion && st.collusion_success.n > 0) {
            std::printf("         collusion guess success %.4f (baseline 1/2^m = %.4f)\n",
                        st.collusion_success.rate,
                        1.0 / static_cast<double>(std::size_t{1} << s.bid_length));
        }
    }
    if (!out_path.empty()) {
        if (format == "csv") {
            std::string csv = "decoys,trials,detected,rate,ci99_lo,ci99_hi,analytic\n";
            for (const auto& row : rows) {
                const auto& st = row.at("stats");
                const auto& det = st.at("detection");
                csv += std::to_string(row.at("decoys").get<std::size_t>()) + "," +
                       std::to_string(st.at("trials").get<std::size_t>()) + "," +
                       std::to_string(det.at("successes").get<std::size_t>()) + "," +
                       std::to_string(det.at("rate").get<double>()) + "," +
                       std::to_string(det.at("ci99_lo").get<double>()) + "," +
                       std::to_string(det.at("ci99_hi").get<double>()) + "," +
                       (row.contains("analytic_detection")
                            ? std::to_string(row.at("analytic_detection").get<double>())
                            : "-") +
                       "\n";
            }
            write_or_print(csv, out_path);
        } else {
            write_or_print(nlohmann::json{{"sweep", rows}}.dump(2) + "\n", out_path);
        }
    }
    return 0;
}

int cmd_example3() {
    const Scenario s = example3_scenario();
    RngStream rng(derive_seed(s.seed, 0));
    const AuctionConfig cfg = make_auction_config(s, rng);
    const auto res = run_auction(cfg, rng);

    std::cout << res.transcript.to_ndjson();
    std::cout << "\nverdict: " << to_label(res.outcome.verdict) << "\n";
    if (res.outcome.winner) {
        std::cout << "winner:  " << party_name(*res.outcome.winner) << " with bid "
                  << res.outcome.announced_bid->bits() << "\n";
    }
    for (const auto& [id, bid] : res.outcome.decoded_bids) {
        std::cout << "decoded " << party_name(id) << ": " << bid.bits() << "\n";
    }

    // checks against the worked example's pinned values
    bool ok = true;
    const auto check = [&ok](const char* what, bool pass) {
        std::cout << (pass ? "ok   " : "FAIL ") << what << "\n";
        ok = ok && pass;
    };

    std::vector<StateVector> regs;
    for (const auto& e : res.transcript.events()) {
        if (e.step == "S6" && e.kind == "qsend") {
            regs.push_back(state_from_json(e.payload.at("register")));
        }
    }
    check("run completed",
          res.outcome.verdict == Verdict::Completed);
    check("encoded register (Bob) = |1>|1>|->|+> up to phase",
          regs.size() == 2 &&
              equal_up_to_phase(regs[0],
                                from_states({CanonicalState::One, CanonicalState::One,
                                             CanonicalState::Minus, CanonicalState::Plus})));
    check("encoded register (Charlie) = |+>|1>|+>|0> up to phase",
          regs.size() == 2 &&
              equal_up_to_phase(regs[1],
                                from_states({CanonicalState::Plus, CanonicalState::One,
                                             CanonicalState::Plus, CanonicalState::Zero})));
    check("decoded bids 1011 / 0111",
          res.outcome.decoded_bids.at(1).bits() == "1011" &&
              res.outcome.decoded_bids.at(2).bits() == "0111");
    check("winner is Bob with 1011",
          res.outcome.winner && *res.outcome.winner == 1 &&
              res.outcome.announced_bid->bits() == "1011");
    check("post-confirmation passed",
          !res.outcome.post_confirmations.empty() &&
              res.outcome.post_confirmations.at(2));
    return ok ? 0 : 1;
}

int cmd_table2(const std::string& out_path) {
    const Scenario s = example3_scenario();
    RngStream rng(derive_seed(s.seed, 0));
    const AuctionConfig cfg = make_auction_config(s, rng);
    const auto res = run_auction(cfg, rng);
    const std::size_t cbits =
        cfg.bid_length * static_cast<std::size_t>(cfg.n_parties - 1);
    const EfficiencyReport rep = efficiency_report(res.transcript, cbits);
    std::cout << efficiency_table_text(rep);
    if (!out_path.empty()) {
        write_or_print(efficiency_to_json(rep).dump(2) + "\n", out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-photon sealed-bid auction protocol simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, transcript_path;
    std::string format = "json";
    std::size_t trials = 1;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "run a scenario and report statistics");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--trials", trials, "number of Monte Carlo trials");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_path, "write the report to this file");
    run->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--transcript", transcript_path,
                    "write the first trial's transcript (NDJSON)");

    std::string attack_type, basis_policy, edge, fabricated_bid;
    int target = 0, fabricated_winner = 0;
    std::vector<int> colluders;
    std::vector<std::size_t> sweep;
    std::size_t attack_trials = 10000;
    std::string attack_out, attack_format = "json";

    auto* attack = app.add_subcommand("attack", "run attack experiments");
    attack->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    attack->add_option("--type", attack_type, "attack type")
        ->required()
        ->check(CLI::IsMember(
            {"cnot", "intercept_resend", "false_announcement", "collusion"}));
    attack->add_option("--basis-policy", basis_policy, "intercept-resend basis policy")
        ->check(CLI::IsMember({"fixed_z", "fixed_x", "uniform_xy", "uniform_zxy"}));
    attack->add_option("--target", target, "tapped or spied-on bidder id");
    attack->add_option("--edge", edge, "tapped transmission")
        ->check(CLI::IsMember({"s2", "s5", "s6"}));
    attack->add_option("--fabricated-bid", fabricated_bid,
                       "bid announced by the dishonest auctioneer");
    attack->add_option("--fabricated-winner", fabricated_winner,
                       "winner announced by the dishonest auctioneer");
    attack->add_option("--colluders", colluders, "colluding bidder ids")
        ->delimiter(',');
    attack->add_option("--sweep-decoys", sweep, "decoy counts to sweep")
        ->delimiter(',');
    attack->add_option("--trials", attack_trials, "trials per sweep point");
    attack->add_option("--out", attack_out, "write sweep results to this file");
    attack->add_option("--format", attack_format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* example3 =
        app.add_subcommand("example3", "run the built-in three-party example");
    std::string table2_out;
    auto* table2 =
        app.add_subcommand("table2", "emit the quantum consumption comparison");
    table2->add_option("--out", table2_out, "also write the table as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, trials, seed, out_path, format,
                           transcript_path);
        }
        if (attack->parsed()) {
            return cmd_attack(scenario_path, attack_type, basis_policy, target,
                              edge, fabricated_bid, fabricated_winner, colluders,
                              sweep, attack_trials, attack_out, attack_format);
        }
        if (example3->parsed()) return cmd_example3();
        if (table2->parsed()) return cmd_table2(table2_out);
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
