#include "catdb/table.hpp"

#include <algorithm>

namespace catdb {

Table Table::make(Signature sig, ClassificationPtr cls,
                  const std::vector<std::pair<Name, Tup>>& rows) {
    if (!cls) {
        throw InternalError("table without classification");
    }
    if (sig.universe != cls->types()) {
        throw BoundaryMismatchError("signature universe differs from the classification's types");
    }
    ValidationReport report;
    Table table;
    for (const auto& [key, tup] : rows) {
        if (table.content_.count(key) != 0) {
            report.add("entity integrity: duplicate key '" + key + "'");
            continue;
        }
        bool row_ok = true;
        for (const auto& [column, sort] : sig.sorts) {
            auto it = tup.entries.find(column);
            if (it == tup.entries.end()) {
                report.add("domain integrity: row '" + key + "' has no entry for column '" + column +
                           "'");
                row_ok = false;
            } else if (!cls->holds(it->second, sort)) {
                report.add("domain integrity: (" + key + ", " + column + ", " + it->second +
                           ") is not of sort " + sort);
                row_ok = false;
            }
        }
        for (const auto& [column, value] : tup.entries) {
            if (!sig.has_column(column)) {
                report.add("domain integrity: row '" + key + "' has extra column '" + column + "'");
                row_ok = false;
            }
        }
        if (row_ok) {
            table.content_.emplace(key, tup);
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid table", std::move(report));
    }
    table.sig_ = std::move(sig);
    table.cls_ = std::move(cls);
    return table;
}

Table make_table(const Signature& sig, ClassificationPtr cls,
                 const std::vector<std::pair<Name, Tup>>& rows) {
    return Table::make(sig, std::move(cls), rows);
}

NameSet Table::keys() const {
    NameSet out;
    for (const auto& [key, tup] : content_) {
        out.insert(out.end(), key);
    }
    return out;
}

const Tup& Table::row(const Name& key) const {
    auto it = content_.find(key);
    if (it == content_.end()) {
        throw UnknownNameError("table has no key '" + key + "'");
    }
    return it->second;
}

bool operator==(const Table& a, const Table& b) {
    bool same_cls = a.cls_ == b.cls_ || (a.cls_ && b.cls_ && *a.cls_ == *b.cls_);
    return same_cls && a.sig_ == b.sig_ && a.content_ == b.content_;
}

bool same_table(const TablePtr& a, const TablePtr& b) {
    return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------

ValidationReport check_table_morphism(const Table& t1, const Table& t2, const NameMap& col_map,
                                      const NameMap& type_map, const NameMap& inst_map,
                                      const NameMap& key_map) {
    ValidationReport report;
    report.merge(check_infomorphism(t2.classification(), t1.classification(), type_map, inst_map));
    report.merge(check_signature_morphism(col_map, t2.signature(), t1.signature(), type_map));
    require_total(key_map, t1.keys(), t2.keys(), "key map k");
    for (const auto& [k1, row1] : t1.content()) {
        const Name& k2 = key_map.at(k1);
        const Tup& row2 = t2.row(k2);
        for (const auto& [i2, i1] : col_map) {
            const Name& expected = apply(inst_map, row1.at(i1), "instance map g");
            const Name& actual = row2.at(i2);
            if (expected != actual) {
                report.add("commuting condition fails at (" + k1 + ", " + i2 + "): t2(" + k2 + ")(" +
                           i2 + ") = " + actual + " but g(t1(" + k1 + ")(" + i1 + ")) = " + expected);
            }
        }
    }
    return report;
}

TableMorphism TableMorphism::make(TablePtr src, TablePtr dst, NameMap col_map, Infomorphism info,
                                  NameMap key_map) {
    if (!(info.source() == dst->classification()) || !(info.target() == src->classification())) {
        throw BoundaryMismatchError(
            "infomorphism must run from the target table's classification to the source's");
    }
    auto report =
        check_table_morphism(*src, *dst, col_map, info.type_map(), info.inst_map(), key_map);
    if (!report.ok()) {
        throw ValidationError("invalid table morphism", std::move(report));
    }
    TableMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.col_map_ = std::move(col_map);
    m.info_ = std::move(info);
    m.key_map_ = std::move(key_map);
    return m;
}

TableMorphism TableMorphism::make_fiber(TablePtr src, TablePtr dst, NameMap col_map,
                                        NameMap key_map) {
    if (!(src->classification() == dst->classification())) {
        throw BoundaryMismatchError("fiber morphism between tables over different classifications");
    }
    auto info = Infomorphism::identity(src->classification_ptr());
    return make(std::move(src), std::move(dst), std::move(col_map), std::move(info),
                std::move(key_map));
}

TableMorphism TableMorphism::identity(TablePtr table) {
    TableMorphism m;
    m.col_map_ = identity_map(table->signature().arity());
    m.key_map_ = identity_map(table->keys());
    m.info_ = Infomorphism::identity(table->classification_ptr());
    m.src_ = table;
    m.dst_ = std::move(table);
    return m;
}

bool operator==(const TableMorphism& a, const TableMorphism& b) {
    return same_table(a.src_, b.src_) && same_table(a.dst_, b.dst_) && a.col_map_ == b.col_map_ &&
           a.key_map_ == b.key_map_ && a.info_ == b.info_;
}

TableMorphism compose_table_morphisms(const TableMorphism& m1, const TableMorphism& m2) {
    if (!same_table(m1.dst_ptr(), m2.src_ptr())) {
        throw BoundaryMismatchError("table morphisms are not composable: target of the first "
                                    "differs from source of the second");
    }
    return TableMorphism::make(m1.src_ptr(), m2.dst_ptr(),
                               compose_maps(m2.col_map(), m1.col_map()),
                               compose_infomorphisms(m2.info(), m1.info()),
                               compose_maps(m1.key_map(), m2.key_map()));
}

// ---------------------------------------------------------------------------

Table migrate(const Table& table, const Infomorphism& info) {
    if (!(info.target() == table.classification())) {
        throw BoundaryMismatchError("migrate: table is not over the infomorphism's target");
    }
    Signature sig = f_star(table.signature(), info.type_map());
    sig.universe = info.source().types();
    std::vector<std::pair<Name, Tup>> rows;
    rows.reserve(table.size());
    for (const auto& [key, tup] : table.content()) {
        Tup out;
        for (const auto& [column, sort] : table.signature().sorts) {
            for (const auto& [x2, x1] : info.type_map()) {
                if (x1 == sort) {
                    out.entries.emplace(pullback_column(column, x2), info.inst_map().at(tup.at(column)));
                }
            }
        }
        rows.emplace_back(key, std::move(out));
    }
    return Table::make(std::move(sig), info.source_ptr(), rows);
}

// ---------------------------------------------------------------------------

namespace {

struct IsoSearch {
    const Table& a;
    const Table& b;
    std::vector<Name> a_cols;
    std::vector<Name> b_cols;
    std::vector<std::vector<std::size_t>> candidates;  // per b column, indices into a_cols
    std::vector<std::size_t> assignment;                // b column -> a column index
    std::vector<bool> used;

    std::vector<Name> project(const Tup& row, bool from_a) const {
        std::vector<Name> out;
        out.reserve(b_cols.size());
        for (std::size_t j = 0; j < b_cols.size(); ++j) {
            out.push_back(from_a ? row.at(a_cols[assignment[j]]) : row.at(b_cols[j]));
        }
        return out;
    }

    std::optional<TableIsomorphism> leaf() const {
        using Keyed = std::pair<std::vector<Name>, Name>;
        std::vector<Keyed> rows_a;
        std::vector<Keyed> rows_b;
        for (const auto& [k, row] : a.content()) rows_a.emplace_back(project(row, true), k);
        for (const auto& [k, row] : b.content()) rows_b.emplace_back(project(row, false), k);
        std::sort(rows_a.begin(), rows_a.end());
        std::sort(rows_b.begin(), rows_b.end());
        for (std::size_t r = 0; r < rows_a.size(); ++r) {
            if (rows_a[r].first != rows_b[r].first) {
                return std::nullopt;
            }
        }
        TableIsomorphism iso;
        for (std::size_t j = 0; j < b_cols.size(); ++j) {
            iso.col_map.emplace(b_cols[j], a_cols[assignment[j]]);
        }
        for (std::size_t r = 0; r < rows_a.size(); ++r) {
            iso.key_map.emplace(rows_a[r].second, rows_b[r].second);
        }
        return iso;
    }

    std::optional<TableIsomorphism> run(std::size_t j) {
        if (j == b_cols.size()) {
            return leaf();
        }
        for (std::size_t i : candidates[j]) {
            if (used[i]) continue;
            used[i] = true;
            assignment[j] = i;
            if (auto found = run(j + 1)) {
                return found;
            }
            used[i] = false;
        }
        return std::nullopt;
    }
};

std::vector<Name> column_profile(const Table& t, const Name& column) {
    std::vector<Name> values;
    values.reserve(t.size());
    for (const auto& [k, row] : t.content()) values.push_back(row.at(column));
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace

std::optional<TableIsomorphism> tables_isomorphic(const Table& a, const Table& b,
                                                  IsoSearchLimits limits) {
    if (!(a.classification() == b.classification())) {
        throw BoundaryMismatchError("isomorphism test needs tables over one classification");
    }
    for (const Table* t : {&a, &b}) {
        if (t->signature().sorts.size() > limits.max_columns) {
            throw SizeCapError("isomorphism search capped at " + std::to_string(limits.max_columns) +
                               " columns");
        }
        if (t->size() > limits.max_keys) {
            throw SizeCapError("isomorphism search capped at " + std::to_string(limits.max_keys) +
                               " keys");
        }
    }
    if (a.signature().sorts.size() != b.signature().sorts.size() || a.size() != b.size()) {
        return std::nullopt;
    }
    IsoSearch search{a, b, {}, {}, {}, {}, {}};
    for (const auto& [c, s] : a.signature().sorts) search.a_cols.push_back(c);
    for (const auto& [c, s] : b.signature().sorts) search.b_cols.push_back(c);
    std::vector<std::vector<Name>> a_profiles;
    for (const auto& c : search.a_cols) a_profiles.push_back(column_profile(a, c));
    for (const auto& bc : search.b_cols) {
        auto profile = column_profile(b, bc);
        std::vector<std::size_t> cands;
        for (std::size_t i = 0; i < search.a_cols.size(); ++i) {
            if (a.signature().sort(search.a_cols[i]) == b.signature().sort(bc) &&
                a_profiles[i] == profile) {
                cands.push_back(i);
            }
        }
        if (cands.empty()) {
            return std::nullopt;
        }
        search.candidates.push_back(std::move(cands));
    }
    search.assignment.assign(search.b_cols.size(), 0);
    search.used.assign(search.a_cols.size(), false);
    return search.run(0);
}

}  // namespace catdb
