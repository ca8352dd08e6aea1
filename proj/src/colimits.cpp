#include "catdb/colimits.hpp"

#include "catdb/union_find.hpp"
#include "family_search.hpp"

namespace catdb {

Table initial_table(ClassificationPtr cls) {
    Signature sig{identity_map(cls->types()), cls->types()};
    return Table::make(std::move(sig), std::move(cls), {});
}

namespace kernels {
namespace {

detail::FamilySearch column_search(const TableDiagram& d) {
    std::vector<Name> objects(d.shape().objects().begin(), d.shape().objects().end());
    std::map<Name, std::size_t> position;
    std::vector<std::map<Name, std::size_t>> column_index(objects.size());
    std::vector<std::size_t> counts;
    std::map<Name, std::size_t> sort_id;
    std::vector<std::vector<std::size_t>> labels(objects.size());
    for (std::size_t j = 0; j < objects.size(); ++j) {
        position[objects[j]] = j;
        const auto& sorts = d.table(objects[j]).signature().sorts;
        if (sorts.size() > kMaxColimitArity) {
            throw SizeCapError("colimit column enumeration is capped at " +
                               std::to_string(kMaxColimitArity) + " columns per table; '" +
                               objects[j] + "' has " + std::to_string(sorts.size()));
        }
        std::size_t n = 0;
        for (const auto& [column, sort] : sorts) {
            column_index[j][column] = n++;
            labels[j].push_back(sort_id.emplace(sort, sort_id.size()).first->second);
        }
        counts.push_back(n);
    }
    // Arrow e: j -> j' constrains col_map_e(i_j') = i_j.
    std::vector<detail::FamilyConstraint> constraints;
    for (const auto& a : d.shape().non_identity_arrows()) {
        detail::FamilyConstraint c{position.at(a.cod), position.at(a.dom), {}};
        for (const auto& [target_col, source_col] : d.morphism(a.name).col_map()) {
            c.map.push_back(column_index[c.to].at(source_col));
        }
        constraints.push_back(std::move(c));
    }
    return detail::FamilySearch(std::move(counts), std::move(constraints), std::move(labels));
}

}  // namespace

std::vector<ColumnFamily> column_families_serial(const TableDiagram& diagram) {
    return column_search(diagram).serial();
}

std::vector<ColumnFamily> column_families_parallel(const TableDiagram& diagram) {
    return column_search(diagram).parallel();
}

}  // namespace kernels

ColimitResult colimit(const TableDiagram& diagram) {
    const ClassificationPtr& cls = diagram.classification_ptr();
    std::vector<Name> objects(diagram.shape().objects().begin(), diagram.shape().objects().end());
    ColimitResult result;

    // Columns.
    Signature sig{{}, cls->types()};
    if (objects.empty()) {
        for (const auto& x : cls->types()) {
            sig.sorts.emplace(x, x);
            result.column_families.emplace(x, std::vector<Name>{});
        }
    } else {
        std::vector<std::vector<Name>> column_names;
        for (const auto& j : objects) {
            const auto arity = diagram.table(j).signature().arity();
            column_names.emplace_back(arity.begin(), arity.end());
        }
        for (const auto& family : kernels::column_families_parallel(diagram)) {
            std::vector<Name> cols;
            for (std::size_t j = 0; j < objects.size(); ++j) cols.push_back(column_names[j][family[j]]);
            Name name = encode_family(cols);
            sig.sorts.emplace(name, diagram.table(objects[0]).signature().sort(cols[0]));
            result.column_families.emplace(std::move(name), std::move(cols));
        }
    }

    // Key classes.
    std::vector<Member> members;
    std::map<Member, std::size_t> member_index;
    for (const auto& j : objects) {
        for (const auto& [key, row] : diagram.table(j).content()) {
            member_index[{j, key}] = members.size();
            members.emplace_back(j, key);
        }
    }
    UnionFind classes(members.size());
    for (const auto& a : diagram.shape().non_identity_arrows()) {
        for (const auto& [key, image] : diagram.morphism(a.name).key_map()) {
            classes.unite(member_index.at({a.dom, key}), member_index.at({a.cod, image}));
        }
    }
    std::map<std::size_t, Name> root_name;
    for (std::size_t m = 0; m < members.size(); ++m) {
        Name n = members[m].first + "." + members[m].second;
        auto [it, inserted] = root_name.emplace(classes.find(m), n);
        if (!inserted && n < it->second) it->second = n;
    }
    std::map<Member, Name> class_of;
    for (std::size_t m = 0; m < members.size(); ++m) {
        const Name& cname = root_name.at(classes.find(m));
        class_of[members[m]] = cname;
        result.key_classes[cname].push_back(members[m]);
    }

    // Content, checked on every representative of each class.
    std::map<Name, std::size_t> position;
    for (std::size_t j = 0; j < objects.size(); ++j) position[objects[j]] = j;
    std::vector<std::pair<Name, Tup>> rows;
    for (const auto& [cname, ms] : result.key_classes) {
        Tup tup;
        bool first = true;
        for (const auto& [j, key] : ms) {
            Tup candidate;
            const Tup& row = diagram.table(j).row(key);
            for (const auto& [col, family] : result.column_families) {
                candidate.entries.emplace(col, row.at(family[position.at(j)]));
            }
            if (first) {
                tup = std::move(candidate);
                first = false;
            } else if (!(candidate == tup)) {
                throw InternalError("colimit content is not well defined on key class " + cname);
            }
        }
        rows.emplace_back(cname, std::move(tup));
    }
    result.table = std::make_shared<const Table>(Table::make(std::move(sig), cls, rows));

    for (std::size_t j = 0; j < objects.size(); ++j) {
        NameMap col_map;
        for (const auto& [col, family] : result.column_families) col_map.emplace(col, family[j]);
        NameMap key_map;
        for (const auto& [key, row] : diagram.table(objects[j]).content()) {
            key_map.emplace(key, class_of.at({objects[j], key}));
        }
        result.injections.emplace(
            objects[j], TableMorphism::make_fiber(diagram.table_ptr(objects[j]), result.table,
                                                  std::move(col_map), std::move(key_map)));
    }
    return result;
}

ColimitResult coproduct(const TablePtr& left, const TablePtr& right) {
    if (!(left->classification() == right->classification())) {
        throw BoundaryMismatchError("coproduct needs tables over one classification");
    }
    std::map<Name, TablePtr> tables{{"left", left}, {"right", right}};
    return colimit(TableDiagram::make(discrete_category({"left", "right"}), std::move(tables),
                                      std::map<Name, FiberMaps>{}));
}

Cocone as_cocone(const ColimitResult& colim) {
    Cocone cocone{colim.table, {}};
    for (const auto& [j, m] : colim.injections) cocone.legs.emplace(j, fiber_maps(m));
    return cocone;
}

ValidationReport check_cocone(const TableDiagram& diagram, const Cocone& cocone) {
    ValidationReport report;
    if (!cocone.apex) {
        report.add("cocone has no apex");
        return report;
    }
    if (!(cocone.apex->classification() == *diagram.classification_ptr())) {
        report.add("apex is over a different classification");
        return report;
    }
    for (const auto& x : diagram.shape().objects()) {
        auto it = cocone.legs.find(x);
        if (it == cocone.legs.end()) {
            report.add("cocone has no leg at '" + x + "'");
            continue;
        }
        report.merge(check_fiber_morphism(diagram.table(x), *cocone.apex, it->second), "leg " + x);
    }
    for (const auto& [x, leg] : cocone.legs) {
        if (!diagram.shape().has_object(x)) report.add("cocone leg at unknown object '" + x + "'");
    }
    if (!report.ok()) {
        return report;
    }
    for (const auto& [name, a] : diagram.shape().arrows()) {
        FiberMaps composed = compose_fiber(fiber_maps(diagram.morphism(name)), cocone.legs.at(a.cod));
        const FiberMaps& direct = cocone.legs.at(a.dom);
        for (const auto& [k, v] : composed.key_map) {
            if (direct.key_map.at(k) != v) {
                report.add("triangle at arrow " + name + " fails on key '" + k + "': " + v +
                           " != " + direct.key_map.at(k));
            }
        }
        for (const auto& [i, v] : composed.col_map) {
            if (direct.col_map.at(i) != v) {
                report.add("triangle at arrow " + name + " fails on column '" + i + "': " + v +
                           " != " + direct.col_map.at(i));
            }
        }
    }
    return report;
}

TableMorphism comediating_morphism(const TableDiagram& diagram, const ColimitResult& colim,
                                   const Cocone& cocone) {
    auto report = check_cocone(diagram, cocone);
    if (!report.ok()) {
        throw ValidationError("invalid cocone", std::move(report));
    }
    const auto& objects = diagram.shape().objects();
    NameMap col_map;
    for (const auto& [col, sort] : cocone.apex->signature().sorts) {
        Name image;
        if (objects.empty()) {
            image = sort;
        } else {
            std::vector<Name> family;
            for (const auto& j : objects) family.push_back(cocone.legs.at(j).col_map.at(col));
            image = encode_family(family);
        }
        if (!colim.table->signature().has_column(image)) {
            throw InternalError("apex column " + col + " maps to a family outside the colimit");
        }
        col_map.emplace(col, std::move(image));
    }
    NameMap key_map;
    for (const auto& [cname, ms] : colim.key_classes) {
        for (const auto& [j, key] : ms) {
            const Name& image = cocone.legs.at(j).key_map.at(key);
            auto [it, inserted] = key_map.emplace(cname, image);
            if (!inserted && it->second != image) {
                throw InternalError("comediating key map is not well defined on class " + cname);
            }
        }
    }
    return TableMorphism::make_fiber(colim.table, cocone.apex, std::move(col_map),
                                     std::move(key_map));
}

}  // namespace catdb
