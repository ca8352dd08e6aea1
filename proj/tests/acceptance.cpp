// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Seeds are fixed so every run sees the same objects.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "catdb/cli.hpp"
#include "catdb/io.hpp"
#include "catdb/unified.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace catdb;
using namespace catdb::testing;

namespace {

struct Outcome {
    Failures failures;
    std::string detail;
};

struct Criterion {
    int number;
    std::string title;
    double limit_seconds;  // 0 for no limit
    std::function<Outcome()> run;
};

void add(Failures& into, const Failures& from, const std::string& prefix) {
    for (const auto& f : from) into.push_back(prefix + ": " + f);
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
    args.insert(args.begin(), "catdb");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

std::vector<std::filesystem::path> company_files() {
    return {fixture_path("company.dsl"), fixture_path("company_span.dsl")};
}

Outcome company_fixture() {
    Outcome o;
    const std::string company = fixture_path("company.dsl").string();
    std::string text;
    if (cli({"--in", company, "validate"}, &text) != kExitOk) o.failures.push_back("validate: " + text);
    if (cli({"--in", company, "check-referential-integrity", "COMPANY_DB"}, &text) != kExitOk) {
        o.failures.push_back("check-referential-integrity: " + text);
    }
    Workspace ws = load_workspace({company});
    SketchInterpretation in = sketch_interpretation(*ws.database("COMPANY_DB").db);
    if (in.edges.at({"Emp", "dept"}) != NameMap{{"e1", "d1"}, {"e2", "d2"}, {"e3", "d1"}}) {
        o.failures.push_back("(Emp, dept) interpretation differs");
    }
    if (in.edges.at({"Dept", "mngr"}) != NameMap{{"d1", "e3"}, {"d2", "e2"}}) {
        o.failures.push_back("(Dept, mngr) interpretation differs");
    }
    return o;
}

Outcome company_join() {
    Outcome o;
    Workspace ws = load_workspace(company_files());
    const Database& db = *ws.database("SPAN_DB").db;
    LimitResult lim = join(db);
    auto pairs = nested_loop_join(db.table("Emp"), "dept", db.table("DeptSelf"), "d");
    std::set<std::pair<Name, Name>> got_pairs;
    for (const auto& [key, row] : lim.table->content()) {
        got_pairs.emplace(lim.projections.at("Emp").key_map().at(key), lim.projections.at("DeptSelf").key_map().at(key));
    }
    const std::set<std::pair<Name, Name>> expected{{"e1", "d1"}, {"e2", "d2"}, {"e3", "d1"}};
    if (std::set<std::pair<Name, Name>>(pairs.begin(), pairs.end()) != expected) {
        o.failures.push_back("nested-loop oracle disagrees with the golden pairs");
    }
    if (got_pairs != expected || lim.table->size() != 3) o.failures.push_back("join rows differ from the golden pairs");
    if (lim.table->signature().sorts.size() != 5) {
        o.failures.push_back("join has " + std::to_string(lim.table->signature().sorts.size()) + " columns");
    }
    // Every cell against the source rows named by the nested-loop pair.
    for (const auto& [e, d] : pairs) {
        const Name key = encode_family({d, d, e});  // DRef, DeptSelf, Emp
        if (!lim.table->has_key(key)) {
            o.failures.push_back("missing key " + key);
            continue;
        }
        const std::map<Name, Name> source_key{{"Emp", e}, {"DeptSelf", d}, {"DRef", d}};
        for (const auto& [col, members] : lim.column_classes) {
            for (const auto& [j, c] : members) {
                if (lim.table->cell(key, col) != db.table(j).cell(source_key.at(j), c)) {
                    o.failures.push_back("cell (" + key + ", " + col + ") differs from " + j + "." + c);
                }
            }
        }
    }
    o.detail = "3 rows x 5 columns";
    return o;
}

/// Diagrams shared by criteria 3 to 5.
const std::vector<TableDiagram>& diagrams() {
    static const std::vector<TableDiagram> all = [] {
        gen::Rng rng(3);
        std::vector<TableDiagram> out;
        for (int n = 0; n < 200; ++n) out.push_back(gen::diagram(rng, gen::classification(rng)));
        return out;
    }();
    return all;
}

Outcome limit_oracle() {
    Outcome o;
    std::size_t keys = 0;
    for (std::size_t n = 0; n < diagrams().size(); ++n) {
        LimitResult lim = limit(diagrams()[n]);
        keys += lim.table->size();
        add(o.failures, limit_matches_oracle(diagrams()[n], lim), "diagram " + std::to_string(n));
    }
    o.detail = "200 diagrams, " + std::to_string(keys) + " limit keys";
    return o;
}

Outcome limit_universal() {
    Outcome o;
    gen::Rng rng(4);
    for (std::size_t n = 0; n < diagrams().size(); ++n) {
        LimitResult lim = limit(diagrams()[n]);
        add(o.failures, limit_is_universal(rng, diagrams()[n], lim, 20), "diagram " + std::to_string(n));
    }
    o.detail = "4000 cones";
    return o;
}

Outcome colimit_duals() {
    Outcome o;
    gen::Rng rng(5);
    for (std::size_t n = 0; n < diagrams().size(); ++n) {
        ColimitResult colim = colimit(diagrams()[n]);
        add(o.failures, colimit_matches_oracle(diagrams()[n], colim), "diagram " + std::to_string(n));
        add(o.failures, colimit_is_universal(rng, diagrams()[n], colim, 20), "diagram " + std::to_string(n));
    }
    o.detail = "200 diagrams, 4000 cocones";
    return o;
}

Outcome continuity() {
    Outcome o;
    gen::Rng rng(6);
    std::size_t checked = 0;
    std::size_t resampled = 0;
    while (checked < 100) {
        auto cls = gen::classification(rng);
        auto db = gen::database(rng, cls);
        auto info = gen::infomorphism(rng, cls);
        try {
            add(o.failures, migrate_commutes_with_join(db, info), "pair " + std::to_string(checked));
            ++checked;
        } catch (const SizeCapError&) {
            ++resampled;
        }
    }
    o.detail = "100 pairs, " + std::to_string(resampled) + " resampled over the isomorphism cap";
    return o;
}

Outcome schema_of_join() {
    Outcome o;
    gen::Rng rng(7);
    for (int n = 0; n < 100; ++n) {
        add(o.failures, join_schema_is_reference(gen::database(rng, gen::classification(rng))),
            "database " + std::to_string(n));
    }
    o.detail = "100 databases";
    return o;
}

Outcome classification_databases() {
    Outcome o;
    gen::Rng rng(8);
    const gen::Sizes sizes{6, 6};
    for (int n = 0; n < 100; ++n) {
        add(o.failures, classification_database_is_valid(gen::classification(rng, sizes)),
            "classification " + std::to_string(n));
    }
    for (int n = 0; n < 100; ++n) {
        auto cls = gen::classification(rng, sizes);
        add(o.failures, infomorphism_database_morphism_is_valid(gen::infomorphism(rng, cls, sizes)),
            "infomorphism " + std::to_string(n));
    }
    o.detail = "100 classifications, 100 infomorphisms";
    return o;
}

Outcome category_laws() {
    Outcome o;
    gen::Rng rng(9);
    for (int n = 0; n < 200; ++n) add(o.failures, table_chain_laws(rng), "table chain " + std::to_string(n));
    for (int n = 0; n < 200; ++n) {
        add(o.failures, n % 2 == 0 ? classification_db_chain_laws(rng) : single_table_db_chain_laws(rng),
            "database chain " + std::to_string(n));
    }
    o.detail = "200 table chains, 200 database chains";
    return o;
}

Outcome round_trip() {
    Outcome o;
    Workspace ws = load_workspace(company_files());
    const std::string first = export_dsl(ws);
    Workspace back = parse_workspace(first, "<export>");
    if (!(back == ws)) o.failures.push_back("parse(export(ws)) differs from ws");
    if (export_dsl(back) != first) o.failures.push_back("export is not a fixed point");
    const auto& emp = ws.table("Emp");
    Table from_csv = load_csv(fixture_path("emp.csv"), emp.table->signature(), emp.table->classification_ptr(), "emp");
    if (!(from_csv == *emp.table)) o.failures.push_back("emp.csv differs from the DSL table Emp");
    for (const auto& [name, entry] : ws.tables) {
        const std::string csv = export_csv(*entry.table);
        Table read = read_csv_table(csv, entry.table->signature(), entry.table->classification_ptr(), "key");
        if (!(read == *entry.table) || export_csv(read) != csv) o.failures.push_back("CSV round trip of " + name);
    }
    for (const auto& [name, entry] : ws.databases) {
        for (const auto& [r, t] : entry.db->tables()) {
            if (ws.tables.count(r) && !(*ws.table(r).table == *t)) {
                o.failures.push_back("table " + r + " of " + name + " differs from its table declaration");
            }
        }
    }
    o.detail = std::to_string(first.size()) + " bytes";
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "company fixture", 1.0, company_fixture},
        {2, "company join", 1.0, company_join},
        {3, "limit oracle equivalence", 10.0, limit_oracle},
        {4, "limit universal property", 0.0, limit_universal},
        {5, "colimit duals", 10.0, colimit_duals},
        {6, "continuity of base change", 0.0, continuity},
        {7, "schema of join", 0.0, schema_of_join},
        {8, "classification databases", 0.0, classification_databases},
        {9, "category laws", 0.0, category_laws},
        {10, "round trip", 0.0, round_trip},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
            o.failures.push_back("took " + std::to_string(seconds) + " s");
        }
        const bool pass = o.failures.empty();
        if (!pass) ++failed;
        std::printf("criterion %2d %s: %s (%.3f s%s%s%s)\n", c.number, pass ? "PASS" : "FAIL", c.title.c_str(),
                    seconds, c.limit_seconds > 0 ? ", limit " : "",
                    c.limit_seconds > 0 ? (std::to_string(static_cast<int>(c.limit_seconds)) + " s").c_str() : "",
                    o.detail.empty() ? "" : ("; " + o.detail).c_str());
        for (std::size_t n = 0; n < o.failures.size() && n < 10; ++n) std::printf("    %s\n", o.failures[n].c_str());
        if (o.failures.size() > 10) std::printf("    ... %zu more\n", o.failures.size() - 10);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
