#include <gtest/gtest.h>

#include "catdb/unified.hpp"
#include "support/properties.hpp"

namespace catdb {
namespace {

using namespace catdb::testing;

std::string joined(const Failures& f) {
    std::string out;
    for (const auto& line : f) out += line + "\n";
    return out;
}

#define EXPECT_HOLDS(failures, round) \
    do { \
        auto f_ = (failures); \
        EXPECT_TRUE(f_.empty()) << "round " << (round) << "\n" << joined(f_); \
    } while (0)

class Seeded : public ::testing::TestWithParam<std::uint64_t> {
protected:
    gen::Rng rng{GetParam()};
};

TEST_P(Seeded, GeneratedInfomorphismsSatisfyTheBiconditional) {
    for (int round = 0; round < 40; ++round) {
        auto info = gen::infomorphism(rng, gen::classification(rng));
        const auto& f = info.type_map();
        const auto& g = info.inst_map();
        for (const auto& y : info.target().instances()) {
            for (const auto& x : info.source().types()) {
                EXPECT_EQ(info.source().holds(g.at(y), x), info.target().holds(y, f.at(x))) << y << " " << x;
            }
        }
    }
}

TEST_P(Seeded, InfomorphismCompositionIsAssociativeAndValid) {
    for (int round = 0; round < 40; ++round) {
        auto i1 = gen::infomorphism(rng, gen::classification(rng));
        auto i2 = gen::infomorphism(rng, i1.source_ptr());
        auto i3 = gen::infomorphism(rng, i2.source_ptr());
        auto left = compose_infomorphisms(compose_infomorphisms(i3, i2), i1);
        auto right = compose_infomorphisms(i3, compose_infomorphisms(i2, i1));
        EXPECT_EQ(left, right);
        EXPECT_TRUE(check_infomorphism(left.source(), left.target(), left.type_map(), left.inst_map()).ok());
        EXPECT_EQ(compose_infomorphisms(i1, Infomorphism::identity(i1.target_ptr())), i1);
        EXPECT_EQ(compose_infomorphisms(Infomorphism::identity(i1.source_ptr()), i1), i1);
    }
}

TEST_P(Seeded, TransportKeepsTuplesClassified) {
    for (int round = 0; round < 40; ++round) {
        auto cls = gen::classification(rng);
        auto t = gen::table(rng, cls);
        auto info = gen::infomorphism(rng, cls);
        Signature pulled = f_star(t->signature(), info.type_map());
        NameMap h;
        for (const auto& [i, x2] : pulled.sorts) {
            for (const auto& c : t->signature().arity()) {
                if (pullback_column(c, x2) == i) h.emplace(i, c);
            }
        }
        ASSERT_EQ(h.size(), pulled.sorts.size());
        for (const auto& [k, row] : t->content()) {
            ASSERT_TRUE(classify_tuple(*cls, t->signature(), row));
            EXPECT_TRUE(classify_tuple(info.source(), pulled, tuple_transport(row, h, info.inst_map()))) << k;
        }
    }
}

TEST_P(Seeded, MigrateIsFunctorial) {
    std::size_t checked = 0;
    for (int round = 0; round < 40; ++round) {
        auto cls = gen::classification(rng);
        auto t = gen::table(rng, cls);
        auto i1 = gen::infomorphism(rng, cls);
        auto i2 = gen::infomorphism(rng, i1.source_ptr());
        try {
            EXPECT_TRUE(tables_isomorphic(migrate(*t, Infomorphism::identity(cls)), *t).has_value());
            Table stepwise = migrate(migrate(*t, i1), i2);
            Table direct = migrate(*t, compose_infomorphisms(i2, i1));
            EXPECT_TRUE(tables_isomorphic(stepwise, direct).has_value()) << "round " << round;
            ++checked;
        } catch (const SizeCapError&) {
        }
    }
    EXPECT_GT(checked, 20u);
}

TEST_P(Seeded, LimitsMatchTheOracles) {
    for (int round = 0; round < 30; ++round) {
        auto d = gen::diagram(rng, gen::classification(rng));
        auto lim = limit(d);
        EXPECT_HOLDS(limit_matches_oracle(d, lim), round);
        EXPECT_HOLDS(limit_is_universal(rng, d, lim, 5), round);
    }
}

TEST_P(Seeded, ColimitsMatchTheOracles) {
    for (int round = 0; round < 30; ++round) {
        auto d = gen::diagram(rng, gen::classification(rng));
        auto colim = colimit(d);
        EXPECT_HOLDS(colimit_matches_oracle(d, colim), round);
        EXPECT_HOLDS(colimit_is_universal(rng, d, colim, 5), round);
    }
}

TEST_P(Seeded, MigrateCommutesWithJoin) {
    std::size_t checked = 0;
    for (int round = 0; round < 30; ++round) {
        auto cls = gen::classification(rng);
        auto db = gen::database(rng, cls);
        auto info = gen::infomorphism(rng, cls);
        try {
            EXPECT_HOLDS(migrate_commutes_with_join(db, info), round);
            ++checked;
        } catch (const SizeCapError&) {
        }
    }
    EXPECT_GT(checked, 15u);
}

TEST_P(Seeded, JoinSchemaIsTheReferenceSchema) {
    for (int round = 0; round < 30; ++round) {
        EXPECT_HOLDS(join_schema_is_reference(gen::database(rng, gen::classification(rng))), round);
    }
}

TEST_P(Seeded, ClassificationDatabases) {
    gen::Sizes sizes{6, 6};
    for (int round = 0; round < 30; ++round) {
        auto cls = gen::classification(rng, sizes);
        EXPECT_HOLDS(classification_database_is_valid(cls), round);
        EXPECT_HOLDS(infomorphism_database_morphism_is_valid(gen::infomorphism(rng, cls, sizes)), round);
    }
}

TEST_P(Seeded, SketchInterpretationIsFunctorialOnClassificationDatabases) {
    for (int round = 0; round < 30; ++round) {
        auto cls = gen::classification(rng);
        Database db = db_of_classification(cls);
        bool covered = true;
        for (const auto& y : cls->instances()) {
            bool typed = false;
            for (const auto& x : cls->types()) typed = typed || cls->holds(y, x);
            covered = covered && typed;
        }
        // Untyped instances are keys of no relation.
        ASSERT_EQ(bool(is_unified(db)), covered) << "round " << round;
        if (!covered) continue;
        ASSERT_TRUE(check_referential_integrity(db).ok());
        SketchInterpretation in = sketch_interpretation(db);
        for (const auto& a : db.schema().rel_cat().non_identity_arrows()) {
            for (const auto& [i1, i] : db.schema().sig_morph(a.name)) {
                for (const auto& k : db.keys(a.cod)) {
                    EXPECT_EQ(in.edges.at({a.cod, i}).at(k), in.edges.at({a.dom, i1}).at(db.key_map(a.name).at(k)));
                }
            }
        }
    }
}

TEST_P(Seeded, CompositionLaws) {
    for (int round = 0; round < 20; ++round) {
        EXPECT_HOLDS(table_chain_laws(rng), round);
        EXPECT_HOLDS(classification_db_chain_laws(rng), round);
        EXPECT_HOLDS(single_table_db_chain_laws(rng), round);
    }
}

TEST_P(Seeded, SingleTableDatabaseMorphismsAgreeWithTableMorphisms) {
    for (int round = 0; round < 40; ++round) EXPECT_HOLDS(single_table_agreement(rng), round);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Values(1u, 42u, 20261017u));

}  // namespace
}  // namespace catdb
