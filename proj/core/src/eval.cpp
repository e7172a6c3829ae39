#include "darac/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "darac/errors.hpp"

namespace darac {

namespace {

void check_index(const RetrievalIndex& index) {
    if (index.names.size() != index.descriptors.size()) {
        throw DimensionError("retrieval index: names and descriptors differ in length");
    }
    std::unordered_set<std::string> seen;
    for (const std::string& name : index.names) {
        if (!seen.insert(name).second) {
            throw ContractError("retrieval index: duplicate name '" + name + "'");
        }
    }
    if (!index.descriptors.empty()) {
        const std::size_t dim = index.descriptors.front().size();
        for (const Vector& d : index.descriptors) {
            if (d.size() != dim) {
                throw DimensionError("retrieval index: descriptor dimensions differ");
            }
        }
    }
}

} // namespace

std::vector<RankedHit> knn(const RetrievalIndex& index, const Vector& query, int top,
                           const std::string& exclude_name) {
    check_index(index);
    if (top < 1) {
        throw DomainError("knn: top must be at least 1");
    }
    if (!index.descriptors.empty() && index.descriptors.front().size() != query.size()) {
        throw DimensionError("knn: query dimension mismatch");
    }
    std::vector<RankedHit> hits;
    hits.reserve(index.names.size());
    for (std::size_t i = 0; i < index.names.size(); ++i) {
        if (index.names[i] == exclude_name) continue;
        double sq = 0.0;
        for (std::size_t k = 0; k < query.size(); ++k) {
            const double diff = index.descriptors[i][k] - query[k];
            sq += diff * diff;
        }
        hits.push_back(RankedHit{index.names[i], std::sqrt(sq)});
    }
    std::sort(hits.begin(), hits.end(), [](const RankedHit& a, const RankedHit& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.name < b.name;
    });
    if (static_cast<std::size_t>(top) < hits.size()) {
        hits.resize(static_cast<std::size_t>(top));
    }
    return hits;
}

double average_precision(const std::vector<std::string>& ranked_names,
                         const std::vector<std::string>& positives,
                         const std::vector<std::string>& junk) {
    if (positives.empty()) {
        throw ContractError("average_precision: positive set is empty");
    }
    const std::unordered_set<std::string> positive_set(positives.begin(), positives.end());
    const std::unordered_set<std::string> junk_set(junk.begin(), junk.end());
    for (const std::string& name : positives) {
        if (junk_set.count(name) != 0) {
            throw ProtocolError("average_precision: '" + name +
                                "' is both positive and junk");
        }
    }
    double sum = 0.0;
    int rank = 0;
    int found = 0;
    for (const std::string& name : ranked_names) {
        if (junk_set.count(name) != 0) continue;
        ++rank;
        if (positive_set.count(name) != 0) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(rank);
        }
    }
    return sum / static_cast<double>(positive_set.size());
}

double evaluate_map(const RetrievalIndex& index, const QueryProtocol& protocol) {
    check_index(index);
    if (protocol.queries.empty()) {
        throw ContractError("evaluate_map: protocol has no queries");
    }
    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < index.names.size(); ++i) {
        by_name.emplace(index.names[i], i);
    }
    std::string missing;
    for (const Query& q : protocol.queries) {
        if (by_name.find(q.name) == by_name.end()) {
            if (!missing.empty()) missing += ", ";
            missing += q.name;
        }
    }
    if (!missing.empty()) {
        throw ProtocolError("evaluate_map: queries not in index: " + missing);
    }

    double sum = 0.0;
    for (const Query& q : protocol.queries) {
        const Vector& qvec = index.descriptors[by_name.at(q.name)];
        const std::vector<RankedHit> hits =
            knn(index, qvec, static_cast<int>(index.names.size()), q.name);
        std::vector<std::string> ranked;
        ranked.reserve(hits.size());
        for (const RankedHit& h : hits) ranked.push_back(h.name);
        sum += average_precision(ranked, q.positives, q.junk);
    }
    return sum / static_cast<double>(protocol.queries.size());
}

} // namespace darac
