#pragma once

// Seeded random generators of small valid objects, for property tests and
// the CLI self test.

#include <random>

#include "catdb/colimits.hpp"
#include "catdb/database.hpp"

namespace catdb::gen {

using Rng = std::mt19937_64;

struct Sizes {
    std::size_t max_types = 4;
    std::size_t max_instances = 6;
    std::size_t max_tables = 4;
    std::size_t max_keys = 4;
    std::size_t max_columns = 3;
};

/// At least one type; instances and incidence uniform.
ClassificationPtr classification(Rng& rng, const Sizes& sizes = {});

/// An infomorphism E2 <-> `target` with a freshly built E2. Instances of E1
/// are grouped by their incidence over the image of f; each group lands on
/// its own or a shared E2 instance, and E2 may carry extra instances.
Infomorphism infomorphism(Rng& rng, const ClassificationPtr& target, const Sizes& sizes = {});

/// Columns with random sorts and rows drawn from the sorts' extents.
TablePtr table(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes = {});

/// A morphism out of `src` into a fresh table over a fresh classification.
TableMorphism table_morphism(Rng& rng, const TablePtr& src, const Sizes& sizes = {});

/// Diagram over the free category on a random DAG of 1..max_tables objects.
TableDiagram diagram(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes = {});

/// Database over the free category on a random DAG, built as the opposite
/// of a random diagram.
Database database(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes = {});

/// A cone over the diagram. Every cone factors through the limit, so the
/// apex keys pick limit keys and apex columns cover (possibly merged)
/// limit columns, plus free extra columns.
Cone cone(Rng& rng, const TableDiagram& diagram, const LimitResult& lim, const Sizes& sizes = {});

/// A cocone, dually: apex columns pick colimit columns and colimit keys land
/// on (possibly merged) apex keys, plus free extra keys.
Cocone cocone(Rng& rng, const TableDiagram& diagram, const ColimitResult& colim,
              const Sizes& sizes = {});

}  // namespace catdb::gen
