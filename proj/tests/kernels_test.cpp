#include <gtest/gtest.h>

#include "catdb/gen.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace catdb {
namespace {

using namespace catdb::testing;

std::set<std::vector<Name>> key_names(const TableDiagram& d, const std::vector<kernels::KeyFamily>& families) {
    std::vector<std::vector<Name>> keys;
    for (const auto& j : d.shape().objects()) {
        auto ks = d.table(j).keys();
        keys.emplace_back(ks.begin(), ks.end());
    }
    std::set<std::vector<Name>> out;
    for (const auto& f : families) {
        std::vector<Name> named;
        for (std::size_t n = 0; n < f.size(); ++n) named.push_back(keys[n].at(f[n]));
        out.insert(named);
    }
    return out;
}

std::set<std::vector<Name>> column_names(const TableDiagram& d,
                                         const std::vector<kernels::ColumnFamily>& families) {
    std::vector<std::vector<Name>> cols;
    for (const auto& j : d.shape().objects()) {
        auto cs = d.table(j).signature().arity();
        cols.emplace_back(cs.begin(), cs.end());
    }
    std::set<std::vector<Name>> out;
    for (const auto& f : families) {
        std::vector<Name> named;
        for (std::size_t n = 0; n < f.size(); ++n) named.push_back(cols[n].at(f[n]));
        out.insert(named);
    }
    return out;
}

TEST(Kernels, SpanFamilies) {
    auto d = span_diagram();
    auto keys = kernels::key_families_serial(d);
    EXPECT_EQ(keys, kernels::key_families_parallel(d));
    EXPECT_EQ(key_names(d, keys), brute_force_key_families(d));
    auto cols = kernels::column_families_serial(d);
    EXPECT_EQ(cols, kernels::column_families_parallel(d));
    EXPECT_EQ(column_names(d, cols), brute_force_column_families(d));
}

TEST(Kernels, SerialAndParallelAgreeOnGeneratedDiagrams) {
    gen::Rng rng(20261017);
    for (int round = 0; round < 150; ++round) {
        auto cls = gen::classification(rng);
        auto d = gen::diagram(rng, cls);
        auto keys = kernels::key_families_serial(d);
        ASSERT_EQ(keys, kernels::key_families_parallel(d)) << "round " << round;
        EXPECT_EQ(key_names(d, keys), brute_force_key_families(d)) << "round " << round;
        auto cols = kernels::column_families_serial(d);
        ASSERT_EQ(cols, kernels::column_families_parallel(d)) << "round " << round;
        EXPECT_EQ(column_names(d, cols), brute_force_column_families(d)) << "round " << round;
    }
}

TEST(Kernels, LargerDiagramsStillAgree) {
    gen::Rng rng(7);
    gen::Sizes big{5, 12, 5, 9, 4};
    for (int round = 0; round < 30; ++round) {
        auto cls = gen::classification(rng, big);
        auto d = gen::diagram(rng, cls, big);
        EXPECT_EQ(kernels::key_families_serial(d), kernels::key_families_parallel(d)) << "round " << round;
        EXPECT_EQ(kernels::column_families_serial(d), kernels::column_families_parallel(d)) << "round " << round;
    }
}

TEST(Kernels, SerialOrderIsLexicographic) {
    gen::Rng rng(3);
    for (int round = 0; round < 50; ++round) {
        auto d = gen::diagram(rng, gen::classification(rng));
        auto keys = kernels::key_families_serial(d);
        EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
        EXPECT_EQ(std::set<kernels::KeyFamily>(keys.begin(), keys.end()).size(), keys.size());
    }
}

}  // namespace
}  // namespace catdb
