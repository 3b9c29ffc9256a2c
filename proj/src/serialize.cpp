#include "bsync/serialize.hpp"

#include <json.hpp>

namespace bsync {

std::string to_json(const SlipReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["q"] = report.q;
    j["K_hat"] = report.k_hat;
    j["is_slip"] = report.is_slip;
    j["dominance"] = report.dominance;
    j["L"] = report.dft_len;
    return j.dump();
}

std::string to_json(const SyncResult& result) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    auto decided = nlohmann::ordered_json::array();
    for (const cplx& s : result.decided.symbols)
        decided.push_back({s.real(), s.imag()});
    j["decided"] = std::move(decided);
    j["mu_history"] = result.mu_history;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    nlohmann::ordered_json corrected;
    corrected["rate"] = result.corrected_rate.rate;
    corrected["rounds"] = result.corrected_rate.rounds;
    auto history = nlohmann::ordered_json::array();
    for (const CorrectionRound& r : result.corrected_rate.history)
        history.push_back({{"K_hat", r.k_hat}, {"chosen_sign", r.chosen_sign}});
    corrected["history"] = std::move(history);
    corrected["converged"] = result.corrected_rate.converged;
    j["corrected_rate"] = std::move(corrected);
    return j.dump();
}

} // namespace bsync
