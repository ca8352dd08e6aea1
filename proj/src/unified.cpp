#include "catdb/unified.hpp"

#include <algorithm>
#include <iterator>

namespace catdb {

Classification relation_classification(const Database& db) {
    std::vector<Name> types;
    NameSet instances;
    std::vector<std::pair<Name, Name>> holds;
    for (const auto& [r, table] : db.tables()) {
        types.push_back(r);
        for (const auto& k : table->keys()) {
            instances.insert(k);
            holds.emplace_back(k, r);
        }
    }
    return Classification::make(types, std::vector<Name>(instances.begin(), instances.end()), holds);
}

UnifiedCheck is_unified(const Database& db) {
    const Classification rel = relation_classification(db);
    const Classification& cls = db.classification();
    auto describe = [](const NameSet& extra, const std::string& what) {
        std::string out;
        for (const auto& n : extra) out += (out.empty() ? "" : ", ") + n;
        return what + ": " + out;
    };
    auto difference = [](const NameSet& a, const NameSet& b) {
        NameSet out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
        return out;
    };
    if (rel.types() != cls.types()) {
        auto extra = difference(cls.types(), rel.types());
        if (!extra.empty()) return {false, describe(extra, "types that are not relations")};
        return {false, describe(difference(rel.types(), cls.types()), "relations that are not types")};
    }
    if (rel.instances() != cls.instances()) {
        auto extra = difference(rel.instances(), cls.instances());
        if (!extra.empty()) return {false, describe(extra, "keys not declared as instances")};
        return {false, describe(difference(cls.instances(), rel.instances()), "instances that are not keys")};
    }
    for (const auto& [y, x] : cls.incidence()) {
        if (!rel.holds(y, x)) return {false, y + " is of type " + x + " but not a key of relation " + x};
    }
    for (const auto& [k, r] : rel.incidence()) {
        if (!cls.holds(k, r)) return {false, k + " is a key of relation " + r + " but not of type " + r};
    }
    return {true, {}};
}

namespace {

void require_unified_schema(const DbSchema& schema) {
    if (schema.rel_cat().objects() != schema.universe()) {
        throw NotUnifiedError("relation symbols differ from the type universe");
    }
}

}  // namespace

SketchGraph sketch_graph(const DbSchema& schema) {
    require_unified_schema(schema);
    SketchGraph g;
    g.nodes = schema.rel_cat().objects();
    for (const auto& [r, sig] : schema.sig_at()) {
        for (const auto& [column, sort] : sig.sorts) g.edges.push_back({r, column, sort});
    }
    g.constraint_arrows = schema.rel_cat().non_identity_arrows();
    return g;
}

ValidationReport check_referential_integrity(const Database& db) {
    require_unified_schema(db.schema());
    ValidationReport report;
    for (const auto& [r, table] : db.tables()) {
        for (const auto& [k, row] : table->content()) {
            for (const auto& [i, value] : row.entries) {
                const Name& target = table->signature().sort(i);
                if (!db.table(target).has_key(value)) {
                    report.add("referential integrity: (" + r + ", " + k + ", " + i + ", " + value +
                               ") is not a key of " + target);
                }
            }
        }
    }
    return report;
}

SketchInterpretation sketch_interpretation(const Database& db) {
    auto report = check_referential_integrity(db);
    if (!report.ok()) {
        throw ValidationError("referential integrity fails", std::move(report));
    }
    auto check = is_unified(db);
    if (!check) throw NotUnifiedError(check.diagnostic);
    SketchInterpretation out;
    for (const auto& [r, table] : db.tables()) {
        out.nodes.emplace(r, table->keys());
        for (const auto& column : table->signature().arity()) {
            NameMap edge;
            for (const auto& [k, row] : table->content()) edge.emplace(k, row.at(column));
            out.edges.emplace(std::make_pair(r, column), std::move(edge));
        }
    }
    return out;
}

}  // namespace catdb
