#include "catdb/limits.hpp"

#include "catdb/union_find.hpp"
#include "family_search.hpp"

namespace catdb {

Name encode_family(const std::vector<Name>& family) {
    Name out = "⟨";
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i) out += ",";
        out += family[i];
    }
    out += "⟩";
    return out;
}

Table terminal_table(ClassificationPtr cls) {
    Signature sig{{}, cls->types()};
    return Table::make(std::move(sig), std::move(cls), {{kTerminalKey, Tup{}}});
}

// ---------------------------------------------------------------------------
// Key family kernels

namespace kernels {
namespace {

detail::FamilySearch key_search(const TableDiagram& d) {
    std::vector<Name> objects(d.shape().objects().begin(), d.shape().objects().end());
    std::map<Name, std::size_t> position;
    std::vector<std::map<Name, std::size_t>> key_index(objects.size());
    std::vector<std::size_t> counts;
    for (std::size_t j = 0; j < objects.size(); ++j) {
        position[objects[j]] = j;
        std::size_t n = 0;
        for (const auto& [k, row] : d.table(objects[j]).content()) key_index[j][k] = n++;
        counts.push_back(n);
    }
    std::vector<detail::FamilyConstraint> constraints;
    for (const auto& a : d.shape().non_identity_arrows()) {
        detail::FamilyConstraint c{position.at(a.dom), position.at(a.cod), {}};
        for (const auto& [k, image] : d.morphism(a.name).key_map()) {
            c.map.push_back(key_index[c.to].at(image));
        }
        constraints.push_back(std::move(c));
    }
    return detail::FamilySearch(std::move(counts), std::move(constraints));
}

}  // namespace

std::vector<KeyFamily> key_families_serial(const TableDiagram& diagram) {
    return key_search(diagram).serial();
}

std::vector<KeyFamily> key_families_parallel(const TableDiagram& diagram) {
    return key_search(diagram).parallel();
}

}  // namespace kernels

// ---------------------------------------------------------------------------

namespace {

Name member_name(const Member& m) { return m.first + "." + m.second; }

}  // namespace

LimitResult limit(const TableDiagram& diagram) {
    const ClassificationPtr& cls = diagram.classification_ptr();
    std::vector<Name> objects(diagram.shape().objects().begin(), diagram.shape().objects().end());

    // Column classes.
    std::vector<Member> members;
    std::map<Member, std::size_t> member_index;
    for (const auto& j : objects) {
        for (const auto& [column, sort] : diagram.table(j).signature().sorts) {
            member_index[{j, column}] = members.size();
            members.emplace_back(j, column);
        }
    }
    UnionFind classes(members.size());
    for (const auto& a : diagram.shape().non_identity_arrows()) {
        for (const auto& [target_col, source_col] : diagram.morphism(a.name).col_map()) {
            classes.unite(member_index.at({a.dom, source_col}), member_index.at({a.cod, target_col}));
        }
    }
    std::map<std::size_t, Name> root_name;
    for (std::size_t m = 0; m < members.size(); ++m) {
        Name n = member_name(members[m]);
        auto [it, inserted] = root_name.emplace(classes.find(m), n);
        if (!inserted && n < it->second) it->second = n;
    }
    LimitResult result;
    std::map<Member, Name> class_of;
    Signature sig{{}, cls->types()};
    for (std::size_t m = 0; m < members.size(); ++m) {
        const Name& cname = root_name.at(classes.find(m));
        class_of[members[m]] = cname;
        result.column_classes[cname].push_back(members[m]);
        const Name& sort = diagram.table(members[m].first).signature().sort(members[m].second);
        auto [it, inserted] = sig.sorts.emplace(cname, sort);
        if (!inserted && it->second != sort) {
            throw InternalError("merged column class " + cname + " mixes sorts");
        }
    }

    // Keys and content.
    std::vector<std::vector<Name>> key_names;
    for (const auto& j : objects) {
        const auto keys = diagram.table(j).keys();
        key_names.emplace_back(keys.begin(), keys.end());
    }
    std::vector<std::pair<Name, Tup>> rows;
    std::map<Name, std::vector<Name>> families;
    for (const auto& family : kernels::key_families_parallel(diagram)) {
        std::vector<Name> keys;
        for (std::size_t j = 0; j < objects.size(); ++j) keys.push_back(key_names[j][family[j]]);
        Tup tup;
        for (std::size_t j = 0; j < objects.size(); ++j) {
            for (const auto& [column, value] : diagram.table(objects[j]).row(keys[j]).entries) {
                const Name& cname = class_of.at({objects[j], column});
                auto [it, inserted] = tup.entries.emplace(cname, value);
                if (!inserted && it->second != value) {
                    throw InternalError("limit content is not well defined on class " + cname);
                }
            }
        }
        Name key = encode_family(keys);
        families.emplace(key, keys);
        rows.emplace_back(std::move(key), std::move(tup));
    }
    result.table = std::make_shared<const Table>(Table::make(std::move(sig), cls, rows));

    for (std::size_t j = 0; j < objects.size(); ++j) {
        NameMap col_map;
        for (const auto& [column, sort] : diagram.table(objects[j]).signature().sorts) {
            col_map.emplace(column, class_of.at({objects[j], column}));
        }
        NameMap key_map;
        for (const auto& [key, keys] : families) key_map.emplace(key, keys[j]);
        result.projections.emplace(
            objects[j], TableMorphism::make_fiber(result.table, diagram.table_ptr(objects[j]),
                                                  std::move(col_map), std::move(key_map)));
    }
    return result;
}

LimitResult pullback(const TableMorphism& left, const TableMorphism& right) {
    if (!same_table(left.dst_ptr(), right.dst_ptr())) {
        throw BoundaryMismatchError("pullback legs do not share a target");
    }
    if (!left.info().is_identity() || !right.info().is_identity()) {
        throw BoundaryMismatchError("pullback legs must have identity infomorphisms");
    }
    FinCat span = FinCat::make({"A", "B", "C"}, {{"l", "A", "C"}, {"r", "B", "C"}}, {});
    std::map<Name, TablePtr> tables{
        {"A", left.src_ptr()}, {"B", right.src_ptr()}, {"C", left.dst_ptr()}};
    std::map<Name, TableMorphism> morphisms{{"l", left}, {"r", right}};
    return limit(TableDiagram::make(std::move(span), std::move(tables), morphisms));
}

Cone as_cone(const LimitResult& lim) {
    Cone cone{lim.table, {}};
    for (const auto& [j, m] : lim.projections) cone.legs.emplace(j, fiber_maps(m));
    return cone;
}

TableMorphism mediating_morphism(const TableDiagram& diagram, const LimitResult& lim,
                                 const Cone& cone) {
    auto report = check_cone(diagram, cone);
    if (!report.ok()) {
        throw ValidationError("invalid cone", std::move(report));
    }
    const auto& objects = diagram.shape().objects();
    NameMap key_map;
    for (const auto& [a, row] : cone.apex->content()) {
        std::vector<Name> family;
        for (const auto& j : objects) family.push_back(cone.legs.at(j).key_map.at(a));
        Name key = encode_family(family);
        if (!lim.table->has_key(key)) {
            throw InternalError("cone key " + a + " maps to a family outside the limit");
        }
        key_map.emplace(a, std::move(key));
    }
    NameMap col_map;
    for (const auto& [cname, ms] : lim.column_classes) {
        for (const auto& [j, column] : ms) {
            const Name& image = cone.legs.at(j).col_map.at(column);
            auto [it, inserted] = col_map.emplace(cname, image);
            if (!inserted && it->second != image) {
                throw InternalError("mediating column map is not well defined on class " + cname);
            }
        }
    }
    return TableMorphism::make_fiber(cone.apex, lim.table, std::move(col_map), std::move(key_map));
}

LimitResult select(const Table& table, const Table& ref, const NameMap& binding) {
    if (!(table.classification() == ref.classification())) {
        throw BoundaryMismatchError("select needs tables over one classification");
    }
    ValidationReport report;
    for (const auto& [ref_col, col] : binding) {
        if (!ref.signature().has_column(ref_col)) {
            report.add("reference table has no column '" + ref_col + "'");
        } else if (!table.signature().has_column(col)) {
            report.add("table has no column '" + col + "'");
        } else if (ref.signature().sort(ref_col) != table.signature().sort(col)) {
            report.add("sort mismatch binding '" + ref_col + "' (" + ref.signature().sort(ref_col) +
                       ") to '" + col + "' (" + table.signature().sort(col) + ")");
        }
    }
    if (!report.ok()) {
        throw ValidationError("invalid selection", std::move(report));
    }
    const ClassificationPtr& cls = table.classification_ptr();
    Signature sig{{}, cls->types()};
    for (const auto& [ref_col, col] : binding) sig.sorts.emplace(ref_col, ref.signature().sort(ref_col));

    std::map<Name, Tup> values;
    auto bound_key = [&](const Tup& row, bool from_ref) {
        std::vector<Name> vs;
        Tup tup;
        for (const auto& [ref_col, col] : binding) {
            const Name& v = row.at(from_ref ? ref_col : col);
            vs.push_back(v);
            tup.entries.emplace(ref_col, v);
        }
        Name key = encode_family(vs);
        values.emplace(key, std::move(tup));
        return key;
    };
    NameMap left_keys;
    NameMap right_keys;
    for (const auto& [k, row] : table.content()) left_keys.emplace(k, bound_key(row, false));
    for (const auto& [k, row] : ref.content()) right_keys.emplace(k, bound_key(row, true));
    std::vector<std::pair<Name, Tup>> rows(values.begin(), values.end());
    auto base = std::make_shared<const Table>(Table::make(std::move(sig), cls, rows));
    auto left = TableMorphism::make_fiber(std::make_shared<const Table>(table), base, binding,
                                          std::move(left_keys));
    auto right = TableMorphism::make_fiber(std::make_shared<const Table>(ref), base,
                                           identity_map(base->signature().arity()),
                                           std::move(right_keys));
    return pullback(left, right);
}

TableDiagram migrate_diagram(const TableDiagram& diagram, const Infomorphism& info) {
    std::map<Name, TablePtr> tables;
    for (const auto& [j, t] : diagram.tables()) {
        tables.emplace(j, std::make_shared<const Table>(migrate(*t, info)));
    }
    std::map<Name, FiberMaps> maps;
    for (const auto& a : diagram.shape().non_identity_arrows()) {
        const TableMorphism& m = diagram.morphism(a.name);
        FiberMaps out{{}, m.key_map()};
        for (const auto& [column, sort] : diagram.table(a.cod).signature().sorts) {
            for (const auto& [x2, x1] : info.type_map()) {
                if (x1 == sort) {
                    out.col_map.emplace(pullback_column(column, x2),
                                        pullback_column(m.col_map().at(column), x2));
                }
            }
        }
        maps.emplace(a.name, std::move(out));
    }
    return TableDiagram::make(diagram.shape(), std::move(tables), maps, info.source_ptr());
}

}  // namespace catdb
