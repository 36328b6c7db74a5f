#include "peco/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "peco/errors.hpp"

namespace peco {

nlohmann::ordered_json record_to_json(const RunRecord& record) {
    nlohmann::ordered_json j;
    j["problem_digest"] = record.problem_digest;
    j["dataset_digest"] = record.dataset_digest;
    j["delta"] = record.delta;
    j["family_size"] = record.family_size;
    auto r_bar = nlohmann::ordered_json::array();
    for (const auto& [j_size, united] : record.r_bar) r_bar.push_back({j_size, united});
    j["r_bar"] = r_bar;
    j["fingerprint"] = {{"solver_id", record.fingerprint.solver_id},
                        {"start", record.fingerprint.start},
                        {"eps_feas", record.fingerprint.eps_feas},
                        {"eps_sol", record.fingerprint.eps_sol},
                        {"eps_act", record.fingerprint.eps_act}};
    j["seed"] = record.seed;
    j["alpha"] = record.alpha;
    j["eta"] = record.eta;
    j["z"] = record.z;
    j["x_star"] = record.x_star;
    j["objective"] = record.objective;
    j["timestamp"] = record.timestamp;
    return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord record;
    record.problem_digest = j.at("problem_digest").get<std::string>();
    record.dataset_digest = j.at("dataset_digest").get<std::string>();
    record.delta = j.at("delta").get<std::vector<double>>();
    record.family_size = j.at("family_size").get<std::size_t>();
    for (const auto& pair : j.at("r_bar"))
        record.r_bar.emplace_back(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>());
    const auto& fp = j.at("fingerprint");
    record.fingerprint.solver_id = fp.at("solver_id").get<std::string>();
    record.fingerprint.start = fp.at("start").get<std::vector<double>>();
    record.fingerprint.eps_feas = fp.at("eps_feas").get<double>();
    record.fingerprint.eps_sol = fp.at("eps_sol").get<double>();
    record.fingerprint.eps_act = fp.at("eps_act").get<double>();
    record.seed = j.at("seed").get<std::uint64_t>();
    record.alpha = j.at("alpha").get<double>();
    record.eta = j.at("eta").get<double>();
    record.z = j.at("z").get<std::size_t>();
    record.x_star = j.at("x_star").get<std::vector<double>>();
    record.objective = j.at("objective").get<double>();
    record.timestamp = j.at("timestamp").get<std::string>();
    return record;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void store_append(const std::string& path, const RunRecord& record) {
    if (record.r_bar.size() + 1 != (std::size_t{1} << record.family_size))
        throw Error(ErrorCode::ConfigError,
                    "record carries " + std::to_string(record.r_bar.size()) +
                        " union entries, expected 2^R - 1 for R = " +
                        std::to_string(record.family_size));
    std::string line = record_to_json(record).dump();
    line.push_back('\n');

    int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw Error(ErrorCode::IoError, "cannot open " + path + " for append");
    if (::flock(fd, LOCK_EX) != 0) {
        ::close(fd);
        throw Error(ErrorCode::IoError, "cannot lock " + path);
    }
    const char* data = line.data();
    std::size_t remaining = line.size();
    while (remaining > 0) {
        ssize_t written = ::write(fd, data, remaining);
        if (written < 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
            throw Error(ErrorCode::IoError, "short write to " + path);
        }
        data += written;
        remaining -= static_cast<std::size_t>(written);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
}

StoreQueryResult store_query(const std::string& path, const std::string& problem_digest) {
    StoreQueryResult result;
    std::ifstream in(path);
    if (!in) return result;  // a store that was never written to is empty
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        try {
            RunRecord record = record_from_json(nlohmann::json::parse(line));
            if (problem_digest.empty() || record.problem_digest == problem_digest)
                result.records.push_back(std::move(record));
        } catch (const std::exception&) {
            result.corrupt_lines.push_back(line_number);
        }
    }
    return result;
}

std::vector<std::pair<std::size_t, std::size_t>> predict_r_bar(
    const std::vector<RunRecord>& records, const std::vector<double>& delta, std::size_t k) {
    if (k == 0) throw Error(ErrorCode::ConfigError, "neighbor count must be positive");
    if (records.size() < k)
        throw Error(ErrorCode::InsufficientHistory,
                    "need at least " + std::to_string(k) + " records, have " +
                        std::to_string(records.size()));

    const std::size_t r = records.front().family_size;
    const std::size_t entries = records.front().r_bar.size();
    for (const auto& record : records) {
        if (record.family_size != r || record.r_bar.size() != entries)
            throw Error(ErrorCode::MixedFamilySizes,
                        "history mixes family sizes, refusing to interpolate");
        for (std::size_t e = 0; e < entries; ++e)
            if (record.r_bar[e].first != records.front().r_bar[e].first)
                throw Error(ErrorCode::MixedFamilySizes,
                            "history disagrees on subset layout, refusing to interpolate");
        if (record.delta.size() != delta.size())
            throw Error(ErrorCode::DimensionError,
                        "record delta has " + std::to_string(record.delta.size()) +
                            " components, query has " + std::to_string(delta.size()));
    }

    const std::size_t dim = delta.size();
    std::vector<double> mean(dim, 0.0), scale(dim, 1.0);
    for (const auto& record : records)
        for (std::size_t c = 0; c < dim; ++c) mean[c] += record.delta[c];
    for (std::size_t c = 0; c < dim; ++c) mean[c] /= static_cast<double>(records.size());
    if (records.size() > 1) {
        for (std::size_t c = 0; c < dim; ++c) {
            double ss = 0.0;
            for (const auto& record : records) {
                double d = record.delta[c] - mean[c];
                ss += d * d;
            }
            double sd = std::sqrt(ss / static_cast<double>(records.size() - 1));
            if (sd > 0.0) scale[c] = sd;
        }
    }

    // stable sort keeps append order on distance ties
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> dist(records.size(), 0.0);
    for (std::size_t i = 0; i < records.size(); ++i) {
        double sum = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            double d = (records[i].delta[c] - delta[c]) / scale[c];
            sum += d * d;
        }
        dist[i] = sum;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> prediction(entries);
    std::vector<double> values(k);
    for (std::size_t e = 0; e < entries; ++e) {
        for (std::size_t i = 0; i < k; ++i)
            values[i] = static_cast<double>(records[order[i]].r_bar[e].second);
        std::sort(values.begin(), values.end());
        double median = (k % 2 == 1) ? values[k / 2]
                                     : 0.5 * (values[k / 2 - 1] + values[k / 2]);
        prediction[e] = {records.front().r_bar[e].first,
                         static_cast<std::size_t>(std::ceil(median))};
    }
    return prediction;
}

}  // namespace peco
