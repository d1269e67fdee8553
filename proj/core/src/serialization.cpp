#include "jscmd/serialization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace jscmd {

namespace {

using nlohmann::json;

json boundary_to_json(double b) {
    if (std::isinf(b)) return b > 0 ? json("inf") : json("-inf");
    return json(b);
}

double boundary_from_json(const json& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("codebook_from_json: bad boundary '" + s +
                                    "'");
    }
    return j.get<double>();
}

} // namespace

std::string codebook_to_json(const MdqCodebook& cb) {
    json j;
    j["L"] = cb.L;
    j["K"] = cb.K;
    j["side_sizes"] = cb.side_sizes;
    json bounds = json::array();
    for (double b : cb.boundaries) bounds.push_back(boundary_to_json(b));
    j["boundaries"] = std::move(bounds);
    j["centroids"] = cb.centroids;
    j["side_centroids"] = cb.side_centroids;
    j["assignment"] = cb.assignment;
    j["bits_per_description"] = cb.bits_per_description;
    return j.dump(2);
}

MdqCodebook codebook_from_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<double> boundaries;
    for (const auto& b : j.at("boundaries"))
        boundaries.push_back(boundary_from_json(b));
    MdqCodebook cb = MdqCodebook::create(
        j.at("K").get<std::size_t>(),
        j.at("side_sizes").get<std::vector<std::size_t>>(),
        std::move(boundaries),
        j.at("centroids").get<std::vector<double>>(),
        j.at("side_centroids").get<std::vector<std::vector<double>>>(),
        j.at("assignment").get<std::vector<std::vector<int>>>());
    if (j.contains("L") && j.at("L").get<std::size_t>() != cb.L)
        throw std::invalid_argument(
            "codebook_from_json: L disagrees with assignment length");
    return cb;
}

std::string hmm_to_json(const HmmModel& hmm) {
    json j;
    j["M"] = hmm.M;
    j["L"] = hmm.L;
    j["initial"] = hmm.initial;
    json trans = json::array();
    for (std::size_t i = 0; i < hmm.M; ++i)
        trans.push_back(std::vector<double>(
            hmm.transition.begin() + i * hmm.M,
            hmm.transition.begin() + (i + 1) * hmm.M));
    j["transition"] = std::move(trans);
    json obs = json::array();
    for (std::size_t ij = 0; ij < hmm.M * hmm.M; ++ij)
        obs.push_back(std::vector<double>(
            hmm.observation.begin() + ij * hmm.L,
            hmm.observation.begin() + (ij + 1) * hmm.L));
    j["observation"] = std::move(obs);
    json red = json::array();
    for (std::size_t i = 0; i < hmm.M; ++i)
        red.push_back(std::vector<double>(
            hmm.observation_reduced.begin() + i * hmm.L,
            hmm.observation_reduced.begin() + (i + 1) * hmm.L));
    j["observation_reduced"] = std::move(red);
    return j.dump(2);
}

HmmModel hmm_from_json(const std::string& text) {
    json j = json::parse(text);
    auto flatten = [](const json& rows) {
        std::vector<double> out;
        for (const auto& row : rows)
            for (const auto& v : row) out.push_back(v.get<double>());
        return out;
    };
    return HmmModel::from(j.at("initial").get<std::vector<double>>(),
                          flatten(j.at("transition")),
                          flatten(j.at("observation")),
                          flatten(j.at("observation_reduced")));
}

} // namespace jscmd
