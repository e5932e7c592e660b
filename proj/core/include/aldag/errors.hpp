#ifndef ALDAG_ERRORS_HPP
#define ALDAG_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aldag {

/// Malformed input table (ragged rows, unreadable file, bad tokens).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Empty cell in the input data; the models here assume complete data.
class MissingValueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input table has a header but no data rows.
class EmptyDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fewer distinct values than requested bins.
class DegenerateBinsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A directed cycle was found where an acyclic graph is required.
class CycleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The set of candidate variable orders exceeds the configured cap.
class TooManyOrdersError : public std::runtime_error {
public:
    TooManyOrdersError(const std::string& what, std::uint64_t cap)
        : std::runtime_error(what), cap_(cap) {}
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t cap_;
};

/// Variable order given to a tree builder is not topological for the DAG.
class OrderMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stage merge request names a missing or identical pair of stages.
class InvalidMergeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aldag

#endif  // ALDAG_ERRORS_HPP
