#pragma once

#include <stdexcept>
#include <string>

namespace sokolab {

struct MalformedLevel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IllegalMove : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoLegalMoves : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* restart math on a distribution with no success mass at or below the cutoff */
struct ZeroSuccessMass : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSolvedRuns : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* tail estimation attempted on a sample whose upper order statistics coincide */
struct DegenerateTail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TraceUnsolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* ground-truth solver hit its state cap while labelling dead ends */
struct OracleExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sokolab
