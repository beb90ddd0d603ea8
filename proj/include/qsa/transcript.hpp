// transcript.hpp
// Ordered, serializable log of every protocol event. One JSON object per
// line; payloads carry state labels and counts, never raw amplitudes unless
// debug registers are enabled.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsa {

struct TranscriptEvent {
    std::size_t index;   // timestamp index, dense from 0
    std::string step;    // "S1".."S7"
    std::string kind;    // "qsend" | "announce" | "check" | "verdict"
    std::string from;
    std::string to;
    nlohmann::json payload;
};

class Transcript {
public:
    void record(std::string step, std::string kind, std::string from,
                std::string to, nlohmann::json payload) {
        events_.push_back(TranscriptEvent{events_.size(), std::move(step),
                                          std::move(kind), std::move(from),
                                          std::move(to), std::move(payload)});
    }

    const std::vector<TranscriptEvent>& events() const { return events_; }

    std::string to_ndjson() const {
        std::string out;
        for (const auto& e : events_) {
            nlohmann::json j{{"i", e.index},   {"step", e.step},
                             {"kind", e.kind}, {"from", e.from},
                             {"to", e.to},     {"payload", e.payload}};
            out += j.dump();
            out += '\n';
        }
        return out;
    }

private:
    std::vector<TranscriptEvent> events_;
};

} // namespace qsa
