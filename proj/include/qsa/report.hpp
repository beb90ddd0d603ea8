// report.hpp
// Machine-readable statistics reports (JSON, CSV) and the quantum-consumption
// comparison table. Reports carry the scenario hash and seed for replay and
// contain no wall-clock metadata, so equal runs emit equal bytes.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsa/montecarlo.hpp"

namespace qsa {

inline nlohmann::json rate_to_json(const RateWithCI& r) {
    return nlohmann::json{{"successes", r.successes},
                          {"n", r.n},
                          {"rate", r.rate},
                          {"ci99_lo", r.lo},
                          {"ci99_hi", r.hi}};
}

inline RateWithCI rate_from_json(const nlohmann::json& j) {
    RateWithCI r;
    r.successes = j.at("successes").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.rate = j.at("rate").get<double>();
    r.lo = j.at("ci99_lo").get<double>();
    r.hi = j.at("ci99_hi").get<double>();
    return r;
}

inline nlohmann::json stats_to_json(const RunStatistics& st) {
    return nlohmann::json{
        {"report_version", 1},
        {"seed", st.seed},
        {"scenario_hash", st.scenario_digest},
        {"trials", st.trials},
        {"completions", st.completions},
        {"channel_aborts", st.channel_aborts},
        {"postconf_aborts", st.postconf_aborts},
        {"ties", st.ties},
        {"detection", rate_to_json(st.detection)},
        {"per_decoy", rate_to_json(st.per_decoy)},
        {"decode_errors", rate_to_json(st.decode_errors)},
        {"collusion_success", rate_to_json(st.collusion_success)},
        {"carrier_qubits", st.carrier_qubits},
        {"decoy_qubits", st.decoy_qubits},
        {"epr_qubits", st.epr_qubits},
        {"bid_cbits", st.bid_cbits},
        {"xi_mean", st.xi_mean}};
}

inline RunStatistics stats_from_json(const nlohmann::json& j) {
    RunStatistics st;
    st.seed = j.at("seed").get<std::uint64_t>();
    st.scenario_digest = j.at("scenario_hash").get<std::uint64_t>();
    st.trials = j.at("trials").get<std::size_t>();
    st.completions = j.at("completions").get<std::size_t>();
    st.channel_aborts = j.at("channel_aborts").get<std::size_t>();
    st.postconf_aborts = j.at("postconf_aborts").get<std::size_t>();
    st.ties = j.at("ties").get<std::size_t>();
    st.detection = rate_from_json(j.at("detection"));
    st.per_decoy = rate_from_json(j.at("per_decoy"));
    st.decode_errors = rate_from_json(j.at("decode_errors"));
    st.collusion_success = rate_from_json(j.at("collusion_success"));
    st.carrier_qubits = j.at("carrier_qubits").get<std::size_t>();
    st.decoy_qubits = j.at("decoy_qubits").get<std::size_t>();
    st.epr_qubits = j.at("epr_qubits").get<std::size_t>();
    st.bid_cbits = j.at("bid_cbits").get<std::size_t>();
    st.xi_mean = j.at("xi_mean").get<double>();
    return st;
}

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

// One row per metric, exact numeric round-trip.
inline std::string stats_to_csv(const RunStatistics& st) {
    std::ostringstream os;
    os << "metric,value\n";
    os << "seed," << st.seed << "\n";
    os << "scenario_hash," << st.scenario_digest << "\n";
    os << "trials," << st.trials << "\n";
    os << "completions," << st.completions << "\n";
    os << "channel_aborts," << st.channel_aborts << "\n";
    os << "postconf_aborts," << st.postconf_aborts << "\n";
    os << "ties," << st.ties << "\n";
    os << "detection_rate," << detail::format_double(st.detection.rate) << "\n";
    os << "detection_ci99_lo," << detail::format_double(st.detection.lo) << "\n";
    os << "detection_ci99_hi," << detail::format_double(st.detection.hi) << "\n";
    os << "detection_n," << st.detection.n << "\n";
    os << "per_decoy_rate," << detail::format_double(st.per_decoy.rate) << "\n";
    os << "per_decoy_ci99_lo," << detail::format_double(st.per_decoy.lo) << "\n";
    os << "per_decoy_ci99_hi," << detail::format_double(st.per_decoy.hi) << "\n";
    os << "per_decoy_n," << st.per_decoy.n << "\n";
    os << "decode_error_rate," << detail::format_double(st.decode_errors.rate) << "\n";
    os << "decode_error_n," << st.decode_errors.n << "\n";
    os << "collusion_success_rate," << detail::format_double(st.collusion_success.rate) << "\n";
    os << "collusion_success_n," << st.collusion_success.n << "\n";
    os << "carrier_qubits," << st.carrier_qubits << "\n";
    os << "decoy_qubits," << st.decoy_qubits << "\n";
    os << "epr_qubits," << st.epr_qubits << "\n";
    os << "bid_cbits," << st.bid_cbits << "\n";
    os << "xi_mean," << detail::format_double(st.xi_mean) << "\n";
    return os.str();
}

inline void emit_report(const RunStatistics& st, const std::string& format,
                        const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    if (format == "json") {
        out << stats_to_json(st).dump(2) << "\n";
    } else if (format == "csv") {
        out << stats_to_csv(st);
    } else {
        throw std::invalid_argument("unknown report format: " + format);
    }
}

// Quantum consumption rate xi = message-carrier qubits per bid cbit. The
// GHZ-based and EPR-based rows are fixed reference figures; the single-photon
// row is computed from an actual run transcript. Decoys and post-confirmation
// qubits are overhead, reported separately from xi.
struct EfficiencyRow {
    std::string protocol_family;
    std::string resource;
    double resource_qubits = 0;
    double message_cbits = 0;
    double xi = 0;
    std::string detection_state;
};

struct EfficiencyReport {
    std::vector<EfficiencyRow> rows;
    std::size_t overhead_decoy_qubits = 0;
    std::size_t overhead_epr_qubits = 0;
};

inline EfficiencyReport efficiency_report(const Transcript& honest_run,
                                          std::size_t bid_cbits) {
    if (bid_cbits == 0) throw std::invalid_argument("bid_cbits must be positive");
    const ResourceCount rc = count_resources(honest_run);
    EfficiencyReport rep;
    rep.rows.push_back({"GHZ-based", "GHZ state", 3, 2, 1.5,
                        "GHZ / EPR pair / single photon"});
    rep.rows.push_back({"EPR-based", "EPR pair", 2, 2, 1.0,
                        "EPR pair / single photon"});
    rep.rows.push_back({"single-photon", "single photon", 1, 1,
                        static_cast<double>(rc.carriers) /
                            static_cast<double>(bid_cbits),
                        "single photon"});
    rep.overhead_decoy_qubits = rc.decoys;
    rep.overhead_epr_qubits = rc.epr;
    return rep;
}

inline nlohmann::json efficiency_to_json(const EfficiencyReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"protocol", r.protocol_family},
                        {"resource", r.resource},
                        {"resource_qubits", r.resource_qubits},
                        {"message_cbits", r.message_cbits},
                        {"xi", r.xi},
                        {"detection_state", r.detection_state}});
    }
    return nlohmann::json{{"rows", rows},
                          {"overhead",
                           {{"decoy_qubits", rep.overhead_decoy_qubits},
                            {"epr_post_confirmation_qubits", rep.overhead_epr_qubits}}}};
}

inline std::string efficiency_table_text(const EfficiencyReport& rep) {
    std::ostringstream os;
    os << "protocol        resource        qubits  cbits  xi     detection state\n";
    for (const auto& r : rep.rows) {
        os << r.protocol_family;
        for (std::size_t i = r.protocol_family.size(); i < 16; ++i) os << ' ';
        os << r.resource;
        for (std::size_t i = r.resource.size(); i < 16; ++i) os << ' ';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-7.0f %-6.0f %-6.3g ", r.resource_qubits,
                      r.message_cbits, r.xi);
        os << buf << r.detection_state << "\n";
    }
    os << "overhead: decoy qubits " << rep.overhead_decoy_qubits
       << ", post-confirmation EPR qubits " << rep.overhead_epr_qubits << "\n";
    return os.str();
}

} // namespace qsa
