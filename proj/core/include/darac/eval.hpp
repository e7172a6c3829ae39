#ifndef DARAC_EVAL_HPP
#define DARAC_EVAL_HPP

#include <string>
#include <vector>

#include "darac/tensor.hpp"

namespace darac {

/// Searchable collection of named descriptors.
struct RetrievalIndex {
    std::vector<std::string> names;
    std::vector<Vector> descriptors;
};

struct Query {
    std::string name;
    std::vector<std::string> positives;
    std::vector<std::string> junk;
};

struct QueryProtocol {
    std::vector<Query> queries;
};

struct RankedHit {
    std::string name;
    double distance = 0.0;
};

/// Exhaustive nearest neighbors: ascending L2 distance, ties broken by name.
/// An index entry named `exclude_name` is skipped (self-match removal).
std::vector<RankedHit> knn(const RetrievalIndex& index, const Vector& query, int top,
                           const std::string& exclude_name = std::string());

/// Average precision of a ranking: junk names are removed (positions close
/// up), then AP = mean over positives of precision at their ranks; positives
/// missing from the ranking contribute zero.
double average_precision(const std::vector<std::string>& ranked_names,
                         const std::vector<std::string>& positives,
                         const std::vector<std::string>& junk);

/// Mean AP over all protocol queries against the index.
double evaluate_map(const RetrievalIndex& index, const QueryProtocol& protocol);

} // namespace darac

#endif // DARAC_EVAL_HPP
