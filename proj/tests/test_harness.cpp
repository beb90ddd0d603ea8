// tests/test_harness.cpp
#include "qsa/montecarlo.hpp"
#include "qsa/report.hpp"
#include "qsa/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace qsa;

namespace {

nlohmann::json golden_json() {
    return nlohmann::json::parse(R"({
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
    })");
}

} // namespace

// ---------- scenario parsing and validation ----------

TEST(Scenario, GoldenFileParses) {
    const Scenario s = parse_scenario(golden_json());
    EXPECT_EQ(s.n_parties, 3);
    EXPECT_EQ(s.bid_length, 4u);
    ASSERT_EQ(s.bids.size(), 2u);
    EXPECT_EQ(s.bids[0].bits(), "1011");
    EXPECT_EQ(s.bids[1].bits(), "0111");
    EXPECT_EQ(s.decoy_rate, 0.5);
    ASSERT_TRUE(s.fixed_carriers.has_value());
    EXPECT_EQ((*s.fixed_carriers)[0],
              (std::vector<CanonicalState>{CanonicalState::Zero, CanonicalState::One,
                                           CanonicalState::Plus, CanonicalState::Minus}));
    ASSERT_TRUE(s.fixed_orders.has_value());
    EXPECT_EQ((*s.fixed_orders)[0], "1324");
    EXPECT_EQ((*s.fixed_orders)[1], "4123");
}

TEST(Scenario, CommittedGoldenFileMatches) {
    const Scenario s = load_scenario(std::string(QSA_SCENARIO_DIR) + "/example3.json");
    EXPECT_EQ(scenario_hash(s), scenario_hash(parse_scenario(golden_json())));
}

TEST(Scenario, OddBidLengthRejected) {
    auto j = golden_json();
    j["bid_length"] = 5;
    j["bids"] = {"10110", "01110"};
    try {
        parse_scenario(j);
        FAIL() << "expected ScenarioError";
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("bid_length must be even"),
                  std::string::npos);
    }
}

TEST(Scenario, BidCountMustMatchParties) {
    auto j = golden_json();
    j["bids"] = {"1011", "0111", "0001"};
    j.erase("fixed");
    EXPECT_THROW(parse_scenario(j), ScenarioError);
}

TEST(Scenario, DecoyRateRange) {
    auto j = golden_json();
    j["decoy_rate"] = 0.0;
    EXPECT_THROW(parse_scenario(j), ScenarioError);
    j["decoy_rate"] = 1.5;
    EXPECT_THROW(parse_scenario(j), ScenarioError);
}

TEST(Scenario, MoreValidationErrors) {
    auto j = golden_json();
    j["bids"] = {"1011", "012x"};
    EXPECT_THROW(parse_scenario(j), ScenarioError);

    j = golden_json();
    j["n_parties"] = 2;
    EXPECT_THROW(parse_scenario(j), ScenarioError);

    j = golden_json();
    j.erase("n_parties");
    EXPECT_THROW(parse_scenario(j), ScenarioError);

    j = golden_json();
    j["fixed"]["carriers"] = {"0 1 + -", "+ 0 - +y"};  // Y state as carrier
    EXPECT_THROW(parse_scenario(j), ScenarioError);

    j = golden_json();
    j["fixed"]["orders"] = {"1324", "4121"};  // not a bijection
    EXPECT_THROW(parse_scenario(j), ScenarioError);

    j = golden_json();
    j["attack"] = {{"type", "warp"}};
    EXPECT_THROW(parse_scenario(j), ScenarioError);

    j = golden_json();
    j["attack"] = {{"type", "false_announcement"}, {"target", 1}};
    EXPECT_THROW(parse_scenario(j), ScenarioError);  // fabricated_bid missing

    j = golden_json();
    j["attack"] = {{"type", "collusion"}, {"target", 1}};
    EXPECT_THROW(parse_scenario(j), ScenarioError);  // colluders missing

    j = golden_json();
    j["attack"] = {{"type", "cnot"}, {"target", 5}};
    EXPECT_THROW(parse_scenario(j), ScenarioError);  // no such bidder
}

TEST(Scenario, MissingFileGivesClearError) {
    EXPECT_THROW(load_scenario("/nonexistent/qsa.json"), ScenarioError);
}

TEST(Scenario, CanonicalSerializationRoundTrip) {
    const Scenario s = parse_scenario(golden_json());
    const nlohmann::json j1 = scenario_to_json(s);
    const Scenario s2 = parse_scenario(j1);
    EXPECT_EQ(j1.dump(), scenario_to_json(s2).dump());
    EXPECT_EQ(scenario_hash(s), scenario_hash(s2));
}

TEST(Scenario, HashDiscriminates) {
    const Scenario a = parse_scenario(golden_json());
    auto j = golden_json();
    j["seed"] = 43;
    const Scenario b = parse_scenario(j);
    EXPECT_NE(scenario_hash(a), scenario_hash(b));
}

// ---------- Monte Carlo harness ----------

TEST(RunTrials, HonestScenarioAlwaysCompletes) {
    const Scenario s = parse_scenario(golden_json());
    const RunStatistics st = run_trials(s, 1000);
    EXPECT_EQ(st.trials, 1000u);
    EXPECT_EQ(st.completions, 1000u);
    EXPECT_EQ(st.channel_aborts, 0u);
    EXPECT_EQ(st.postconf_aborts, 0u);
    EXPECT_EQ(st.ties, 0u);
    EXPECT_EQ(st.detection.n, 0u);  // nothing to detect
    EXPECT_EQ(st.decode_errors.successes, 0u);
    EXPECT_EQ(st.xi_mean, 1.0);  // exactly one carrier qubit per bid cbit
}

TEST(RunTrials, DeterministicForFixedSeed) {
    const Scenario s = parse_scenario(golden_json());
    const auto a = stats_to_json(run_trials(s, 64)).dump();
    const auto b = stats_to_json(run_trials(s, 64)).dump();
    EXPECT_EQ(a, b);

    auto j = golden_json();
    j["seed"] = 4242;
    const auto c = stats_to_json(run_trials(parse_scenario(j), 64)).dump();
    EXPECT_NE(a, c);  // the seed is part of the report
}

TEST(RunTrials, CountersPartitionTrials) {
    auto j = golden_json();
    j["bids"] = {"0101", "0101"};
    const RunStatistics st = run_trials(parse_scenario(j), 100);
    EXPECT_EQ(st.ties, 100u);
    EXPECT_EQ(st.completions + st.channel_aborts + st.postconf_aborts + st.ties,
              st.trials);
}

TEST(RunTrials, ResourceAccountingGoldenNumbers) {
    // N=3, m=4, K=0.5: carriers 2*4, decoys 2*2 (out) + 2*4 (EPR) + 2*2 (back),
    // EPR qubits 2*4 per completed run
    const Scenario s = parse_scenario(golden_json());
    const RunStatistics st = run_trials(s, 10);
    EXPECT_EQ(st.carrier_qubits, 10u * 8u);
    EXPECT_EQ(st.decoy_qubits, 10u * 16u);
    EXPECT_EQ(st.epr_qubits, 10u * 8u);
    EXPECT_EQ(st.bid_cbits, 10u * 8u);
}

TEST(RunTrials, RejectsZeroTrials) {
    const Scenario s = parse_scenario(golden_json());
    EXPECT_THROW(run_trials(s, 0), std::invalid_argument);
}

// ---------- confidence intervals ----------

TEST(BinomialCI, StructuralProperties) {
    const auto r = binomial_rate_ci99(50, 100);
    EXPECT_NEAR(r.rate, 0.5, 1e-12);
    EXPECT_LT(r.lo, r.rate);
    EXPECT_GT(r.hi, r.rate);
    EXPECT_GE(r.lo, 0.0);
    EXPECT_LE(r.hi, 1.0);

    const auto zero = binomial_rate_ci99(0, 100);
    EXPECT_EQ(zero.rate, 0.0);
    EXPECT_EQ(zero.lo, 0.0);
    EXPECT_GT(zero.hi, 0.0);

    const auto all = binomial_rate_ci99(100, 100);
    EXPECT_EQ(all.rate, 1.0);
    EXPECT_LT(all.lo, 1.0);
    EXPECT_EQ(all.hi, 1.0);

    const auto none = binomial_rate_ci99(0, 0);
    EXPECT_EQ(none.n, 0u);

    // interval shrinks with more data
    EXPECT_LT(binomial_rate_ci99(5000, 10000).hi - binomial_rate_ci99(5000, 10000).lo,
              r.hi - r.lo);
}

// ---------- reports ----------

TEST(Report, JsonRoundTripIsExact) {
    const Scenario s = parse_scenario(golden_json());
    const RunStatistics st = run_trials(s, 32);
    const RunStatistics back = stats_from_json(stats_to_json(st));
    EXPECT_EQ(stats_to_json(back).dump(), stats_to_json(st).dump());
    EXPECT_EQ(back.seed, st.seed);
    EXPECT_EQ(back.scenario_digest, st.scenario_digest);
    EXPECT_EQ(back.xi_mean, st.xi_mean);
}

TEST(Report, CsvHasHeaderAndMetricRows) {
    const Scenario s = parse_scenario(golden_json());
    const std::string csv = stats_to_csv(run_trials(s, 8));
    EXPECT_EQ(csv.rfind("metric,value\n", 0), 0u);
    EXPECT_NE(csv.find("\ntrials,8\n"), std::string::npos);
    EXPECT_NE(csv.find("\nseed,42\n"), std::string::npos);
    EXPECT_NE(csv.find("scenario_hash,"), std::string::npos);
    EXPECT_NE(csv.find("xi_mean,1\n"), std::string::npos);
}

TEST(Report, EmitAndReload) {
    const Scenario s = parse_scenario(golden_json());
    const RunStatistics st = run_trials(s, 16);
    const std::string path = testing::TempDir() + "qsa_report_test.json";
    emit_report(st, "json", path);
    std::ifstream in(path);
    ASSERT_TRUE(in.good());
    nlohmann::json j;
    in >> j;
    EXPECT_EQ(stats_to_json(stats_from_json(j)).dump(), stats_to_json(st).dump());
    std::remove(path.c_str());

    EXPECT_THROW(emit_report(st, "xml", path), std::invalid_argument);
    EXPECT_THROW(emit_report(st, "json", "/nonexistent/dir/x.json"), std::runtime_error);
}

TEST(Report, ReportsCarryReplayData) {
    const Scenario s = parse_scenario(golden_json());
    const nlohmann::json j = stats_to_json(run_trials(s, 8));
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 42u);
    EXPECT_EQ(j.at("scenario_hash").get<std::uint64_t>(), scenario_hash(s));
    EXPECT_TRUE(j.at("detection").contains("ci99_lo"));
    EXPECT_TRUE(j.at("detection").contains("n"));
}

// ---------- efficiency ----------

TEST(Efficiency, TableValues) {
    const Scenario s = parse_scenario(golden_json());
    RngStream rng(derive_seed(s.seed, 0));
    const AuctionConfig cfg = make_auction_config(s, rng);
    const auto res = run_auction(cfg, rng);
    ASSERT_EQ(res.outcome.verdict, Verdict::Completed);

    const std::size_t cbits = cfg.bid_length * (cfg.n_parties - 1);
    const EfficiencyReport rep = efficiency_report(res.transcript, cbits);
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_EQ(rep.rows[0].protocol_family, "GHZ-based");
    EXPECT_EQ(rep.rows[0].xi, 1.5);
    EXPECT_EQ(rep.rows[1].protocol_family, "EPR-based");
    EXPECT_EQ(rep.rows[1].xi, 1.0);
    EXPECT_EQ(rep.rows[2].protocol_family, "single-photon");
    EXPECT_EQ(rep.rows[2].xi, 1.0);  // computed from the transcript, exactly

    EXPECT_EQ(rep.overhead_decoy_qubits, 16u);  // 2*2 out + 2*4 EPR + 2*2 back
    EXPECT_EQ(rep.overhead_epr_qubits, 8u);

    const std::string text = efficiency_table_text(rep);
    EXPECT_NE(text.find("GHZ-based"), std::string::npos);
    EXPECT_NE(text.find("1.5"), std::string::npos);
    const nlohmann::json j = efficiency_to_json(rep);
    EXPECT_EQ(j.at("rows").size(), 3u);
}

TEST(Efficiency, TranscriptCarrierCountMatchesFormula) {
    // message-carrier count equals (N-1)*m for every completed honest run
    for (int n = 3; n <= 5; ++n) {
        Scenario s;
        s.n_parties = n;
        s.bid_length = 4;
        s.random_bids = true;
        s.decoy_rate = 0.5;
        s.seed = 1000 + static_cast<std::uint64_t>(n);
        RngStream rng(derive_seed(s.seed, 0));
        const AuctionConfig cfg = make_auction_config(s, rng);
        const auto res = run_auction(cfg, rng);
        const ResourceCount rc = count_resources(res.transcript);
        EXPECT_EQ(rc.carriers, static_cast<std::size_t>(n - 1) * 4u);
    }
}
