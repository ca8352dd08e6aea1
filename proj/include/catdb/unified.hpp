#pragma once

// Databases whose relation symbols double as entity types: relation
// classification, unified-form detection, the sketch graph and its
// interpretation, and referential integrity.

#include <string>
#include <vector>

#include "catdb/database.hpp"

namespace catdb {

/// Types are relation symbols, instances are all keys, k |= r iff k is a
/// key of r.
Classification relation_classification(const Database& db);

struct UnifiedCheck {
    bool unified = false;
    /// Why the check failed; empty when unified.
    std::string diagnostic;

    explicit operator bool() const { return unified; }
};

UnifiedCheck is_unified(const Database& db);

struct SketchEdge {
    Name relation;
    Name column;
    Name target;

    friend bool operator==(const SketchEdge&, const SketchEdge&) = default;
};

struct SketchGraph {
    NameSet nodes;
    /// Sorted by (relation, column).
    std::vector<SketchEdge> edges;
    /// Non-identity arrows of the relation category, recorded as is.
    std::vector<Arrow> constraint_arrows;
};

/// Throws NotUnifiedError unless the relation symbols equal the universe.
SketchGraph sketch_graph(const DbSchema& schema);

struct SketchInterpretation {
    std::map<Name, NameSet> nodes;
    /// (relation, column) -> key of relation -> key of the column's sort.
    std::map<std::pair<Name, Name>, NameMap> edges;
};

/// Throws NotUnifiedError, or ValidationError carrying the referential
/// integrity violations.
SketchInterpretation sketch_interpretation(const Database& db);

/// Every entry must be a key of the relation named by its column's sort.
/// Needs only the schema to be unified, so that a database with a missing
/// referenced row still gets a report. Throws NotUnifiedError otherwise.
ValidationReport check_referential_integrity(const Database& db);

}  // namespace catdb
