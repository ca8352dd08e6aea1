#include "catdb/cli.hpp"

#include <CLI11.hpp>

#include "catdb/gen.hpp"
#include "catdb/io.hpp"

namespace catdb {

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string out;
    std::string format;
    std::vector<std::string> names;
    std::vector<std::string> on;
    std::uint64_t seed = 1;
    std::size_t rounds = 50;
};

class UsageError : public Error {
public:
    using Error::Error;
};

void emit(const Options& opt, const std::string& text, std::ostream& out) {
    if (opt.out.empty()) {
        out << text;
    } else {
        write_file_atomic(opt.out, text);
    }
}

std::string render_table(const Options& opt, const Workspace& ws, const Table& t, const Name& name) {
    if (opt.format == "csv") return export_csv(t);
    if (opt.format == "json") return export_json(t);
    if (opt.format == "dsl") {
        Workspace result;
        Name cls = ws.classification_name(t.classification());
        if (cls.empty()) cls = name + "_cls";
        result.classifications.emplace(cls, t.classification_ptr());
        result.tables.emplace(name, TableEntry{cls, std::make_shared<const Table>(t)});
        return export_dsl(result);
    }
    throw UsageError("unsupported table format '" + opt.format + "'");
}

int cmd_validate(const Options& opt, const Workspace& ws, std::ostream& out) {
    if (!opt.names.empty()) {
        const Name& n = opt.names.front();
        if (ws.morphisms.count(n) || ws.db_morphisms.count(n)) {
            auto report = ws.check_morphism(n);
            if (!report.ok()) {
                out << "invalid: " << n << "\n" << report.str();
                return kExitInvalid;
            }
        } else if (!ws.classifications.count(n) && !ws.tables.count(n) && !ws.infomorphisms.count(n) &&
                   !ws.schemas.count(n) && !ws.databases.count(n)) {
            throw UsageError("no declaration named '" + n + "'");
        }
        out << "valid: " << n << "\n";
        return kExitOk;
    }
    int code = kExitOk;
    std::vector<Name> morphisms;
    for (const auto& [n, m] : ws.morphisms) morphisms.push_back(n);
    for (const auto& [n, m] : ws.db_morphisms) morphisms.push_back(n);
    for (const auto& n : morphisms) {
        auto report = ws.check_morphism(n);
        if (!report.ok()) {
            out << "invalid: " << n << "\n" << report.str();
            code = kExitInvalid;
        }
    }
    if (code == kExitOk) {
        out << "valid: " << ws.classifications.size() << " classifications, " << ws.tables.size()
            << " tables, " << ws.infomorphisms.size() << " infomorphisms, " << ws.schemas.size()
            << " schemas, " << ws.databases.size() << " databases, " << morphisms.size()
            << " morphisms\n";
    }
    return code;
}

int cmd_check_morphism(const Options& opt, const Workspace& ws, std::ostream& out) {
    const Name& n = opt.names.at(0);
    if (!ws.morphisms.count(n) && !ws.db_morphisms.count(n)) {
        throw UsageError("no morphism named '" + n + "'");
    }
    auto report = ws.check_morphism(n);
    if (!report.ok()) {
        out << "invalid: " << n << "\n" << report.str();
        return kExitInvalid;
    }
    out << "valid: " << n << "\n";
    return kExitOk;
}

int cmd_sketch(const Options& opt, const Workspace& ws, std::ostream& out) {
    const Name& n = opt.names.at(0);
    const auto& entry = ws.database(n);
    SketchGraph g = sketch_graph(entry.db->schema());
    if (opt.format == "dot") {
        emit(opt, export_dot(g, n), out);
    } else if (opt.format == "json") {
        emit(opt, export_json(g), out);
    } else {
        throw UsageError("unsupported sketch format '" + opt.format + "'");
    }
    return kExitOk;
}

int cmd_referential_integrity(const Options& opt, const Workspace& ws, std::ostream& out) {
    const Name& n = opt.names.at(0);
    auto report = check_referential_integrity(*ws.database(n).db);
    if (!report.ok()) {
        out << "invalid: " << n << "\n" << report.str();
        return kExitInvalid;
    }
    out << "valid: " << n << "\n";
    return kExitOk;
}

NameMap parse_binding(const std::vector<std::string>& on) {
    NameMap binding;
    for (const auto& spec : on) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw UsageError("--on expects TABLECOL=REFCOL, got '" + spec + "'");
        }
        if (!binding.emplace(spec.substr(eq + 1), spec.substr(0, eq)).second) {
            throw UsageError("reference column bound twice in '" + spec + "'");
        }
    }
    return binding;
}

/// Properties every generated object must satisfy; returns failure lines.
std::vector<std::string> selftest_round(gen::Rng& rng, std::size_t round) {
    std::vector<std::string> failures;
    auto fail = [&](const std::string& what) { failures.push_back("round " + std::to_string(round) + ": " + what); };
    auto cls = gen::classification(rng);
    TableDiagram d = gen::diagram(rng, cls);
    if (kernels::key_families_serial(d) != kernels::key_families_parallel(d)) {
        fail("serial and parallel limit kernels differ");
    }
    if (kernels::column_families_serial(d) != kernels::column_families_parallel(d)) {
        fail("serial and parallel colimit kernels differ");
    }
    LimitResult lim = limit(d);
    if (!check_cone(d, as_cone(lim)).ok()) fail("limit projections do not form a cone");
    Cone c = gen::cone(rng, d, lim);
    if (!check_cone(d, c).ok()) fail("generated cone is invalid");
    mediating_morphism(d, lim, c);
    ColimitResult colim = colimit(d);
    if (!check_cocone(d, as_cocone(colim)).ok()) fail("colimit injections do not form a cocone");
    Cocone cc = gen::cocone(rng, d, colim);
    if (!check_cocone(d, cc).ok()) fail("generated cocone is invalid");
    comediating_morphism(d, colim, cc);

    Workspace ws;
    ws.classifications.emplace("E", cls);
    Database db = gen::database(rng, cls);
    ws.schemas.emplace("S", SchemaEntry{"E", db.schema_ptr()});
    ws.databases.emplace("D", DatabaseEntry{"S", "E", std::make_shared<const Database>(db)});
    const std::string text = export_dsl(ws);
    Workspace back = parse_workspace(text, "<selftest>");
    if (!(back == ws) || export_dsl(back) != text) fail("DSL round trip changed a database");

    Infomorphism info = gen::infomorphism(rng, cls);
    if (!check_infomorphism(info.source(), info.target(), info.type_map(), info.inst_map()).ok()) {
        fail("generated infomorphism is invalid");
    }
    return failures;
}

int cmd_selftest(const Options& opt, std::ostream& out) {
    gen::Rng rng(opt.seed);
    std::vector<std::string> failures;
    for (std::size_t r = 0; r < opt.rounds; ++r) {
        try {
            auto f = selftest_round(rng, r);
            failures.insert(failures.end(), f.begin(), f.end());
        } catch (const Error& e) {
            failures.push_back("round " + std::to_string(r) + ": " + e.what());
        }
    }
    for (const auto& f : failures) out << f << "\n";
    out << "selftest seed " << opt.seed << ": " << opt.rounds << " rounds, " << failures.size()
        << " failures\n";
    return failures.empty() ? kExitOk : kExitInvalid;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Categorical relational database engine", "catdb"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--in", opt.inputs, "Workspace files, read in order")->check(CLI::ExistingFile);

    auto* validate = app.add_subcommand("validate", "Validate the workspace or one declaration");
    validate->add_option("name", opt.names, "Declaration to check")->expected(0, 1);

    auto add_output = [&](CLI::App* cmd, const std::string& default_format, std::vector<std::string> formats) {
        cmd->add_option("--out", opt.out, "Output file (stdout if absent)");
        cmd->add_option("--format", opt.format, "Output format (default " + default_format + ")")
            ->check(CLI::IsMember(std::move(formats)));
    };

    auto* join_cmd = app.add_subcommand("join", "Join of a database");
    join_cmd->add_option("db", opt.names, "Database")->required()->expected(1);
    add_output(join_cmd, "csv", {"csv", "json", "dsl"});

    auto* union_cmd = app.add_subcommand("union", "Distributed union of two tables");
    union_cmd->add_option("tables", opt.names, "Two tables")->required()->expected(2);
    add_output(union_cmd, "csv", {"csv", "json", "dsl"});

    auto* migrate_cmd = app.add_subcommand("migrate", "Base change of a table along an infomorphism");
    migrate_cmd->add_option("args", opt.names, "TABLE INFOMORPHISM")->required()->expected(2);
    add_output(migrate_cmd, "csv", {"csv", "json", "dsl"});

    auto* select_cmd = app.add_subcommand("select", "Rows of a table matching a reference table");
    select_cmd->add_option("args", opt.names, "TABLE REF")->required()->expected(2);
    select_cmd->add_option("--on", opt.on, "TABLECOL=REFCOL")->required();
    add_output(select_cmd, "csv", {"csv", "json", "dsl"});

    auto* check_cmd = app.add_subcommand("check-morphism", "Check a table or database morphism");
    check_cmd->add_option("name", opt.names, "Morphism")->required()->expected(1);

    auto* sketch_cmd = app.add_subcommand("sketch", "Sketch graph of a unified database");
    sketch_cmd->add_option("db", opt.names, "Database")->required()->expected(1);
    add_output(sketch_cmd, "dot", {"dot", "json"});

    auto* ri_cmd = app.add_subcommand("check-referential-integrity", "Foreign keys of a unified database");
    ri_cmd->add_option("db", opt.names, "Database")->required()->expected(1);

    auto* selftest = app.add_subcommand("selftest", "Randomized consistency checks");
    selftest->add_option("--seed", opt.seed, "Generator seed")->capture_default_str();
    selftest->add_option("--rounds", opt.rounds, "Number of rounds")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (opt.format.empty()) opt.format = sketch_cmd->parsed() ? "dot" : "csv";
        if (selftest->parsed()) return cmd_selftest(opt, out);
        std::vector<std::filesystem::path> files(opt.inputs.begin(), opt.inputs.end());
        const Workspace ws = load_workspace(files);
        if (validate->parsed()) return cmd_validate(opt, ws, out);
        if (check_cmd->parsed()) return cmd_check_morphism(opt, ws, out);
        if (sketch_cmd->parsed()) return cmd_sketch(opt, ws, out);
        if (ri_cmd->parsed()) return cmd_referential_integrity(opt, ws, out);
        if (join_cmd->parsed()) {
            const Name& n = opt.names.at(0);
            LimitResult lim = join(*ws.database(n).db);
            emit(opt, render_table(opt, ws, *lim.table, n + "_join"), out);
        } else if (union_cmd->parsed()) {
            ColimitResult u = coproduct(ws.table(opt.names.at(0)).table, ws.table(opt.names.at(1)).table);
            emit(opt, render_table(opt, ws, *u.table, "union"), out);
        } else if (migrate_cmd->parsed()) {
            const auto& info = ws.infomorphism(opt.names.at(1));
            Table t = migrate(*ws.table(opt.names.at(0)).table, *info.info);
            Workspace named;
            named.classifications.emplace(info.source, info.info->source_ptr());
            emit(opt, render_table(opt, named, t, opt.names.at(0) + "_migrated"), out);
        } else if (select_cmd->parsed()) {
            LimitResult sel = select(*ws.table(opt.names.at(0)).table, *ws.table(opt.names.at(1)).table,
                                     parse_binding(opt.on));
            emit(opt, render_table(opt, ws, *sel.table, opt.names.at(0) + "_selected"), out);
        }
        return kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnknownNameError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        if (e.report().issues.size() > 1) err << e.report().str();
        return kExitInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace catdb
