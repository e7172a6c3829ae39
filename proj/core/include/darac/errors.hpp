#ifndef DARAC_ERRORS_HPP
#define DARAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace darac {

/// Shape or bounds mismatch (wrong element count, region outside its map,
/// incompatible vector dimensions).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value outside its mathematical domain (negative activation, rank
/// outside [0,1], negative distance).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A violated call contract (too few samples, train-mode batch of one,
/// empty input where at least one element is required).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A batch whose label composition cannot feed the rank loss: some sample
/// lacks a positive or a negative partner.
class BatchCompositionError : public ContractError {
public:
    using ContractError::ContractError;
};

/// Malformed or unreadable file content.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An evaluation protocol referencing entries the index cannot resolve.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace darac

#endif // DARAC_ERRORS_HPP
