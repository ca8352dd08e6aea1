#include "catdb/gen.hpp"

namespace catdb::gen {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <typename Range>
const auto& pick(Rng& rng, const Range& items) {
    auto it = items.begin();
    std::advance(it, static_cast<long>(uniform(rng, 0, items.size() - 1)));
    return *it;
}

Name indexed(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

/// Sorts with a non-empty extent.
std::vector<Name> inhabited(const Classification& cls) {
    std::vector<Name> out;
    for (const auto& x : cls.types()) {
        if (!cls.extent(x).empty()) out.push_back(x);
    }
    return out;
}

Signature random_signature(Rng& rng, const Classification& cls, std::size_t max_columns) {
    Signature sig{{}, cls.types()};
    const std::size_t n = uniform(rng, 0, max_columns);
    for (std::size_t c = 0; c < n; ++c) sig.sorts.emplace(indexed("c", c), pick(rng, cls.types()));
    return sig;
}

/// Fills the columns of `tup` that are still unset; false if some sort is
/// uninhabited.
bool fill_row(Rng& rng, const Classification& cls, const Signature& sig, Tup& tup) {
    for (const auto& [column, sort] : sig.sorts) {
        if (tup.entries.count(column)) continue;
        const NameSet& ext = cls.extent(sort);
        if (ext.empty()) return false;
        tup.entries.emplace(column, pick(rng, ext));
    }
    return true;
}

struct RawDiagram {
    std::vector<Name> objects;
    std::vector<Arrow> edges;  // lower index -> higher index
    std::map<Name, Signature> sigs;
    std::map<Name, NameMap> col_maps;  // edge -> (cod columns -> dom columns)
    std::map<Name, std::vector<Name>> keys;
    std::map<Name, std::map<Name, Tup>> rows;
    std::map<Name, NameMap> key_maps;  // edge -> (dom keys -> cod keys)
};

RawDiagram raw_diagram(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes) {
    RawDiagram d;
    const std::size_t n = uniform(rng, 1, sizes.max_tables);
    for (std::size_t j = 0; j < n; ++j) {
        d.objects.push_back(indexed("j", j));
        d.sigs.emplace(d.objects.back(), random_signature(rng, *cls, sizes.max_columns));
    }
    std::map<Name, std::vector<Arrow>> outgoing;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t parallel = coin(rng, 0.4) ? (coin(rng, 0.15) ? 2 : 1) : 0;
            for (std::size_t p = 0; p < parallel; ++p) {
                Arrow e{"e" + std::to_string(a) + std::to_string(b) + (p ? "x" : ""), d.objects[a],
                        d.objects[b]};
                // Column map cod -> dom respecting sorts, or no edge.
                NameMap h;
                bool ok = true;
                for (const auto& [column, sort] : d.sigs.at(e.cod).sorts) {
                    std::vector<Name> candidates;
                    for (const auto& [c, s] : d.sigs.at(e.dom).sorts) {
                        if (s == sort) candidates.push_back(c);
                    }
                    if (candidates.empty()) {
                        ok = false;
                        break;
                    }
                    h.emplace(column, pick(rng, candidates));
                }
                if (!ok) continue;
                d.col_maps.emplace(e.name, std::move(h));
                d.key_maps[e.name];
                outgoing[e.dom].push_back(e);
                d.edges.push_back(std::move(e));
            }
        }
    }
    for (std::size_t idx = n; idx-- > 0;) {
        const Name& j = d.objects[idx];
        const Signature& sig = d.sigs.at(j);
        auto& keys = d.keys[j];
        auto& rows = d.rows[j];
        const std::size_t want = uniform(rng, 0, sizes.max_keys);
        for (std::size_t attempt = 0; attempt < 3 * want && keys.size() < want; ++attempt) {
            Tup tup;
            std::map<Name, Name> images;
            bool ok = true;
            for (const auto& e : outgoing[j]) {
                const auto& target_keys = d.keys.at(e.cod);
                if (target_keys.empty()) {
                    ok = false;
                    break;
                }
                const Name& kb = pick(rng, target_keys);
                images.emplace(e.name, kb);
                for (const auto& [ib, ia] : d.col_maps.at(e.name)) {
                    const Name& v = d.rows.at(e.cod).at(kb).at(ib);
                    auto [it, inserted] = tup.entries.emplace(ia, v);
                    if (!inserted && it->second != v) ok = false;
                }
            }
            if (!ok || !fill_row(rng, *cls, sig, tup)) continue;
            Name k = indexed("k", keys.size());
            for (const auto& [e, kb] : images) d.key_maps.at(e).emplace(k, kb);
            keys.push_back(k);
            rows.emplace(std::move(k), std::move(tup));
        }
    }
    return d;
}

}  // namespace

ClassificationPtr classification(Rng& rng, const Sizes& sizes) {
    std::vector<Name> types;
    std::vector<Name> instances;
    std::vector<std::pair<Name, Name>> holds;
    const std::size_t nt = uniform(rng, 1, sizes.max_types);
    const std::size_t ny = uniform(rng, 1, sizes.max_instances);
    for (std::size_t x = 0; x < nt; ++x) types.push_back(indexed("x", x));
    for (std::size_t y = 0; y < ny; ++y) instances.push_back(indexed("y", y));
    for (const auto& y : instances) {
        for (const auto& x : types) {
            if (coin(rng)) holds.emplace_back(y, x);
        }
    }
    return std::make_shared<const Classification>(Classification::make(types, instances, holds));
}

Infomorphism infomorphism(Rng& rng, const ClassificationPtr& target, const Sizes& sizes) {
    std::vector<Name> types;
    NameMap f;
    const std::size_t nt = uniform(rng, 1, sizes.max_types);
    for (std::size_t x = 0; x < nt; ++x) {
        types.push_back(indexed("u", x));
        f.emplace(types.back(), pick(rng, target->types()));
    }
    std::map<NameSet, std::vector<Name>> groups;
    for (const auto& y1 : target->instances()) {
        NameSet profile;
        for (const auto& [x2, x1] : f) {
            if (target->holds(y1, x1)) profile.insert(x2);
        }
        groups[profile].push_back(y1);
    }
    std::vector<Name> instances;
    std::vector<std::pair<Name, Name>> holds;
    NameMap g;
    auto fresh = [&](const NameSet& profile) {
        instances.push_back(indexed("v", instances.size()));
        for (const auto& x2 : profile) holds.emplace_back(instances.back(), x2);
        return instances.back();
    };
    for (const auto& [profile, members] : groups) {
        const bool shared = coin(rng);
        Name y2 = fresh(profile);
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (m > 0 && !shared) y2 = fresh(profile);
            g.emplace(members[m], y2);
        }
    }
    for (std::size_t extra = uniform(rng, 0, 2); extra > 0; --extra) {
        NameSet profile;
        for (const auto& x2 : types) {
            if (coin(rng)) profile.insert(x2);
        }
        fresh(profile);
    }
    auto source =
        std::make_shared<const Classification>(Classification::make(types, instances, holds));
    return Infomorphism::make(source, target, f, g);
}

TablePtr table(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes) {
    Signature sig = random_signature(rng, *cls, sizes.max_columns);
    std::vector<std::pair<Name, Tup>> rows;
    const std::size_t n = uniform(rng, 0, sizes.max_keys);
    for (std::size_t k = 0; k < n; ++k) {
        Tup tup;
        if (!fill_row(rng, *cls, sig, tup)) break;
        rows.emplace_back(indexed("k", k), std::move(tup));
    }
    return std::make_shared<const Table>(Table::make(std::move(sig), cls, rows));
}

TableMorphism table_morphism(Rng& rng, const TablePtr& src, const Sizes& sizes) {
    Infomorphism info = infomorphism(rng, src->classification_ptr(), sizes);
    const Classification& e2 = info.source();
    Signature sig{{}, e2.types()};
    NameMap h;
    const auto src_columns = src->signature().arity();
    if (!src_columns.empty()) {
        const std::size_t n = uniform(rng, 0, sizes.max_columns);
        for (std::size_t c = 0; c < n; ++c) {
            const Name& i1 = pick(rng, src_columns);
            std::vector<Name> candidates;
            for (const auto& [x2, x1] : info.type_map()) {
                if (x1 == src->signature().sort(i1)) candidates.push_back(x2);
            }
            if (candidates.empty()) continue;
            Name i2 = indexed("d", h.size());
            sig.sorts.emplace(i2, pick(rng, candidates));
            h.emplace(std::move(i2), i1);
        }
    }
    std::map<Tup, std::vector<Name>> groups;
    for (const auto& [k1, row] : src->content()) {
        groups[tuple_transport(row, h, info.inst_map())].push_back(k1);
    }
    std::vector<std::pair<Name, Tup>> rows;
    NameMap k;
    for (const auto& [tup, members] : groups) {
        const bool shared = coin(rng);
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (m == 0 || !shared) rows.emplace_back(indexed("m", rows.size()), tup);
            k.emplace(members[m], rows.back().first);
        }
    }
    if (coin(rng, 0.3)) {
        Tup tup;
        if (fill_row(rng, e2, sig, tup)) rows.emplace_back(indexed("m", rows.size()), std::move(tup));
    }
    auto dst = std::make_shared<const Table>(Table::make(sig, info.source_ptr(), rows));
    return TableMorphism::make(src, dst, std::move(h), std::move(info), std::move(k));
}

TableDiagram diagram(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes) {
    RawDiagram d = raw_diagram(rng, cls, sizes);
    std::map<Name, TablePtr> tables;
    for (const auto& j : d.objects) {
        std::vector<std::pair<Name, Tup>> rows(d.rows.at(j).begin(), d.rows.at(j).end());
        tables.emplace(j, std::make_shared<const Table>(Table::make(d.sigs.at(j), cls, rows)));
    }
    std::map<Name, FiberMaps> maps;
    for (const auto& e : d.edges) maps.emplace(e.name, FiberMaps{d.col_maps.at(e.name), d.key_maps.at(e.name)});
    return TableDiagram::make(free_category(d.objects, d.edges), std::move(tables), maps, cls);
}

Database database(Rng& rng, const ClassificationPtr& cls, const Sizes& sizes) {
    RawDiagram d = raw_diagram(rng, cls, sizes);
    std::vector<Arrow> reversed;
    for (const auto& e : d.edges) reversed.push_back({e.name, e.cod, e.dom});
    auto schema = std::make_shared<const DbSchema>(
        DbSchema::make(free_category(d.objects, reversed), cls->types(), d.sigs, d.col_maps));
    return Database::make(std::move(schema), cls, d.keys, d.key_maps, d.rows);
}

Cone cone(Rng& rng, const TableDiagram& diagram, const LimitResult& lim, const Sizes& sizes) {
    const Table& limit = *lim.table;
    const Classification& cls = limit.classification();
    const auto lim_keys = limit.keys();
    std::vector<std::pair<Name, Name>> chosen;  // apex key, limit key
    if (!lim_keys.empty()) {
        const std::size_t m = uniform(rng, 0, sizes.max_keys);
        for (std::size_t a = 0; a < m; ++a) chosen.emplace_back(indexed("a", a), pick(rng, lim_keys));
    }
    Signature sig{{}, cls.types()};
    NameMap apex_of;  // limit column -> apex column
    std::map<Name, Tup> rows;
    for (const auto& [a, l] : chosen) rows[a];
    for (const auto& [column, sort] : limit.signature().sorts) {
        std::vector<Name> mergeable;
        for (const auto& [c, s] : sig.sorts) {
            if (s != sort) continue;
            bool agree = true;
            for (const auto& [a, l] : chosen) agree = agree && rows.at(a).at(c) == limit.cell(l, column);
            if (agree) mergeable.push_back(c);
        }
        Name target;
        if (!mergeable.empty() && coin(rng, 0.3)) {
            target = pick(rng, mergeable);
        } else {
            target = indexed("c", sig.sorts.size());
            sig.sorts.emplace(target, sort);
            for (const auto& [a, l] : chosen) rows.at(a).entries.emplace(target, limit.cell(l, column));
        }
        apex_of.emplace(column, target);
    }
    const auto sorts = chosen.empty() ? std::vector<Name>(cls.types().begin(), cls.types().end())
                                      : inhabited(cls);
    if (!sorts.empty() && coin(rng, 0.5)) {
        Name extra = indexed("c", sig.sorts.size());
        sig.sorts.emplace(extra, pick(rng, sorts));
        for (auto& [a, tup] : rows) fill_row(rng, cls, sig, tup);
    }
    std::vector<std::pair<Name, Tup>> listed(rows.begin(), rows.end());
    auto apex = std::make_shared<const Table>(Table::make(sig, limit.classification_ptr(), listed));
    Cone out{apex, {}};
    for (const auto& j : diagram.shape().objects()) {
        const TableMorphism& proj = lim.projections.at(j);
        FiberMaps leg;
        for (const auto& [column, cls_column] : proj.col_map()) leg.col_map.emplace(column, apex_of.at(cls_column));
        for (const auto& [a, l] : chosen) leg.key_map.emplace(a, proj.key_map().at(l));
        out.legs.emplace(j, std::move(leg));
    }
    return out;
}

Cocone cocone(Rng& rng, const TableDiagram& diagram, const ColimitResult& colim, const Sizes& sizes) {
    const Table& colimit = *colim.table;
    const Classification& cls = colimit.classification();
    const auto colim_columns = colimit.signature().arity();
    Signature sig{{}, cls.types()};
    NameMap family_of;  // apex column -> colimit column
    if (!colim_columns.empty()) {
        const std::size_t n = uniform(rng, 0, sizes.max_columns);
        for (std::size_t b = 0; b < n; ++b) {
            const Name& c = pick(rng, colim_columns);
            sig.sorts.emplace(indexed("b", b), colimit.signature().sort(c));
            family_of.emplace(indexed("b", b), c);
        }
    }
    auto project = [&](const Name& class_key) {
        Tup tup;
        for (const auto& [b, c] : family_of) tup.entries.emplace(b, colimit.cell(class_key, c));
        return tup;
    };
    std::map<Name, Tup> rows;
    NameMap apex_key;  // colimit key -> apex key
    for (const auto& [class_key, row] : colimit.content()) {
        Tup tup = project(class_key);
        std::vector<Name> mergeable;
        for (const auto& [a, existing] : rows) {
            if (existing == tup) mergeable.push_back(a);
        }
        if (!mergeable.empty() && coin(rng, 0.3)) {
            apex_key.emplace(class_key, pick(rng, mergeable));
        } else {
            Name a = indexed("a", rows.size());
            rows.emplace(a, std::move(tup));
            apex_key.emplace(class_key, std::move(a));
        }
    }
    if (coin(rng, 0.5)) {
        Tup tup;
        if (fill_row(rng, cls, sig, tup)) rows.emplace(indexed("a", rows.size()), std::move(tup));
    }
    std::vector<std::pair<Name, Tup>> listed(rows.begin(), rows.end());
    auto apex = std::make_shared<const Table>(Table::make(sig, colimit.classification_ptr(), listed));
    Cocone out{apex, {}};
    for (const auto& j : diagram.shape().objects()) {
        const TableMorphism& inj = colim.injections.at(j);
        FiberMaps leg;
        for (const auto& [b, c] : family_of) leg.col_map.emplace(b, inj.col_map().at(c));
        for (const auto& [k, class_key] : inj.key_map()) leg.key_map.emplace(k, apex_key.at(class_key));
        out.legs.emplace(j, std::move(leg));
    }
    return out;
}

}  // namespace catdb::gen
