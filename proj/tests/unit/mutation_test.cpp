#include "impactlab/error.hpp"
#include "impactlab/minilang/analysis.hpp"
#include "impactlab/minilang/syntax.hpp"
#include "impactlab/mutation.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace impactlab;
using namespace impactlab::minilang;

namespace {

std::vector<std::string> rendered_bodies(const Program& p, Operator op, const std::string& fn) {
    std::vector<std::string> out;
    for (const auto& site : enumerate_sites(p, op)) {
        if (site.function == fn) {
            out.push_back(print(*apply_mutation(p, site).find_function(fn)->body));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Operators, NamesRoundTrip) {
    for (Operator op : kAllOperators) {
        EXPECT_EQ(parse_operator(to_string(op)), op);
    }
    EXPECT_FALSE(parse_operator("XYZ").has_value());
}

TEST(EnumerateSites, AorOnProduct) {
    const Program p = parse("fn mul(a, b){ a * b }");
    EXPECT_EQ(rendered_bodies(p, Operator::AOR, "mul"),
              (std::vector<std::string>{"a", "a % b", "a + b", "a - b", "a / b", "b"}));
}

TEST(EnumerateSites, RorOnLessThan) {
    const Program p = parse("fn lt(x, y){ x < y }");
    EXPECT_EQ(rendered_bodies(p, Operator::ROR, "lt"),
              (std::vector<std::string>{"false", "true", "x != y", "x <= y", "x == y", "x > y", "x >= y"}));
}

TEST(EnumerateSites, LcrOnConjunction) {
    const Program p = parse("fn both(x, y){ x > 0 && y > 0 }");
    EXPECT_EQ(rendered_bodies(p, Operator::LCR, "both"),
              (std::vector<std::string>{"false", "true", "x > 0", "x > 0 || y > 0", "y > 0"}));
}

TEST(EnumerateSites, NoLogicalOperatorsMeansNoLcr) {
    EXPECT_TRUE(enumerate_sites(fixture::multiplier_program(), Operator::LCR).empty());
}

TEST(EnumerateSites, AbsAndUoiTargets) {
    const Program p = parse("fn f(x){ x < 1 }");
    // numeric: x, 1; boolean: x < 1
    EXPECT_EQ(rendered_bodies(p, Operator::ABS, "f"), (std::vector<std::string>{"abs(x) < 1", "x < abs(1)"}));
    EXPECT_EQ(rendered_bodies(p, Operator::UOI, "f"),
              (std::vector<std::string>{"!(x < 1)", "-x < 1", "x + 1 < 1", "x - 1 < 1", "x < -1", "x < 1 + 1",
                                        "x < 1 - 1"}));
}

TEST(EnumerateSites, OnlyApplicationFunctions) {
    const Program p = parse("fn f(a){ a + 1 } fn test_f(){ assert(f(1) == 2) }");
    for (Operator op : kAllOperators) {
        for (const auto& site : enumerate_sites(p, op)) {
            EXPECT_EQ(site.function, "f");
        }
    }
}

TEST(EnumerateSites, SourceOrderedAndInjective) {
    for (const auto& path : fixture::corpus_files()) {
        const Program p = parse_file(path);
        for (Operator op : kAllOperators) {
            const auto sites = enumerate_sites(p, op);
            std::set<std::string> ids;
            for (const auto& s : sites) {
                EXPECT_TRUE(ids.insert(mutant_id(s)).second) << mutant_id(s);
            }
            for (const auto& s : sites) {
                EXPECT_FALSE(equal(apply_mutation(p, s), p)) << mutant_id(s);
            }
        }
    }
}

TEST(EnumerateSites, DistinctSitesMayCoincide) {
    // Both sides of x * x keep x, so two ids name the same program.
    const Program p = parse("fn sq(x) { x * x }\nfn test_sq() { assert(sq(2) == 4) }\n");
    std::vector<std::string> ids;
    for (const auto& s : enumerate_sites(p, Operator::AOR)) {
        if (print(*apply_mutation(p, s).find_function("sq")->body) == "x") {
            ids.push_back(mutant_id(s));
        }
    }
    EXPECT_EQ(ids, (std::vector<std::string>{"sq@0:AOR:left", "sq@0:AOR:right"}));
}

TEST(ApplyMutation, ChangesExactlyOneFunctionAndRoundTrips) {
    for (const auto& path : fixture::corpus_files()) {
        const Program p = parse_file(path);
        for (Operator op : kAllOperators) {
            for (const auto& site : enumerate_sites(p, op)) {
                const Program m = apply_mutation(p, site);
                for (std::size_t i = 0; i < p.functions.size(); ++i) {
                    const bool same = equal(p.functions[i], m.functions[i]);
                    EXPECT_EQ(same, p.functions[i].name != site.function) << mutant_id(site);
                }
                EXPECT_TRUE(equal(parse(print(m)), m)) << mutant_id(site);
            }
        }
    }
}

TEST(ApplyMutation, RejectsBadSites) {
    const Program p = parse("fn f(a){ a + 1 }");
    EXPECT_THROW(apply_mutation(p, {"f", 99, Operator::AOR, Variant::ArithSub}), InvalidArgument);
    EXPECT_THROW(apply_mutation(p, {"g", 0, Operator::AOR, Variant::ArithSub}), InvalidArgument);
    EXPECT_THROW(apply_mutation(p, {"f", 1, Operator::AOR, Variant::ArithSub}), InvalidArgument);
    EXPECT_THROW(apply_mutation(p, {"f", 0, Operator::AOR, Variant::RelLt}), InvalidArgument);
}

TEST(MutantId, Format) {
    EXPECT_EQ(mutant_id({"mul", 0, Operator::AOR, Variant::ArithAdd}), "mul@0:AOR:add");
    EXPECT_EQ(mutant_id({"f", 3, Operator::UOI, Variant::Complement}), "f@3:UOI:not");
}

TEST(Sample, ExhaustionReturnsAll) {
    const Program p = fixture::multiplier_program();
    const MutantSample s = sample_mutants(p, Operator::ROR, 1000, 7);
    EXPECT_TRUE(s.exhausted);
    EXPECT_EQ(s.mutants.size(), s.population);
    EXPECT_EQ(s.population, enumerate_sites(p, Operator::ROR).size());
}

TEST(Sample, ZeroIsEmpty) {
    for (Operator op : kAllOperators) {
        EXPECT_TRUE(sample_mutants(fixture::multiplier_program(), op, 0, 1).mutants.empty());
    }
}

TEST(Sample, DeterministicDistinctAndSourceOrdered) {
    const Program p = parse_file(fixture::corpus_path("numeric.mini"));
    const MutantSample a = sample_mutants(p, Operator::UOI, 40, 9);
    const MutantSample b = sample_mutants(p, Operator::UOI, 40, 9);
    ASSERT_EQ(a.mutants.size(), 40u);
    EXPECT_FALSE(a.exhausted);
    std::vector<std::string> ids_a, ids_b;
    for (const auto& m : a.mutants) {
        ids_a.push_back(m.id);
        EXPECT_EQ(m.base_hash, program_hash(p));
    }
    for (const auto& m : b.mutants) {
        ids_b.push_back(m.id);
    }
    EXPECT_EQ(ids_a, ids_b);
    EXPECT_EQ(std::set<std::string>(ids_a.begin(), ids_a.end()).size(), ids_a.size());

    const auto all = enumerate_sites(p, Operator::UOI);
    std::vector<std::size_t> positions;
    for (const auto& m : a.mutants) {
        positions.push_back(std::find(all.begin(), all.end(), m.site) - all.begin());
    }
    EXPECT_TRUE(std::is_sorted(positions.begin(), positions.end()));
}

TEST(Sample, RoughlyUniform) {
    const Program p = parse("fn f(a, b){ a + b + a + b + a }");
    const std::size_t population = enumerate_sites(p, Operator::AOR).size();
    std::map<std::string, int> hits;
    const int draws = 4000;
    for (int s = 0; s < draws; ++s) {
        for (const auto& m : sample_mutants(p, Operator::AOR, 1, s).mutants) {
            ++hits[m.id];
        }
    }
    EXPECT_EQ(hits.size(), population);
    const double expected = static_cast<double>(draws) / static_cast<double>(population);
    for (const auto& [id, n] : hits) {
        EXPECT_NEAR(n, expected, expected * 0.5) << id;
    }
}

TEST(Record, MultiplierProductToSum) {
    const Program p = fixture::multiplier_program();
    const CallGraph g = extract_call_graph(p, false);
    const auto sites = enumerate_sites(p, Operator::AOR);
    const auto it = std::find_if(sites.begin(), sites.end(), [](const MutationSite& s) {
        return s.function == "mul" && s.variant == Variant::ArithAdd;
    });
    ASSERT_NE(it, sites.end());
    const Mutant mutant{mutant_id(*it), program_hash(p), *it, apply_mutation(p, *it)};
    const MutationRecord r = compute_record(p, mutant, g);
    EXPECT_EQ(r.m, "mul");
    EXPECT_EQ(r.op, "AOR");
    EXPECT_EQ(r.ais, (std::set<NodeId>{"test_mul", "test_pow", "test_fac", "test_op"}));
}

TEST(Record, EquivalentMutantHasEmptyAis) {
    const Program p = parse("fn one(){ 1 } fn test_one(){ assert(one() == 1) }");
    const CallGraph g = extract_call_graph(p, false);
    const auto sites = enumerate_sites(p, Operator::ABS);
    ASSERT_EQ(sites.size(), 1u);
    const Mutant mutant{mutant_id(sites[0]), program_hash(p), sites[0], apply_mutation(p, sites[0])};
    EXPECT_TRUE(compute_record(p, mutant, g).ais.empty());
}

TEST(Record, FacMutantsOnlyBreakTestFac) {
    const Program p = fixture::multiplier_program();
    const CallGraph g = extract_call_graph(p, false);
    for (Operator op : kAllOperators) {
        for (const auto& m : sample_mutants(p, op, 1000, 0).mutants) {
            if (m.site.function != "fac") {
                continue;
            }
            const auto ais = compute_record(p, m, g).ais;
            EXPECT_TRUE(ais.empty() || ais == std::set<NodeId>{"test_fac"}) << m.id;
        }
    }
}

TEST(Record, AisOnlyContainsTestsThatInvokeTheMutatedFunction) {
    for (const auto& path : fixture::corpus_files()) {
        const Program p = parse_file(path);
        const CallGraph g = extract_call_graph(p, true);
        std::map<std::string, std::set<std::string>> invoked;
        for (const auto& t : run_tests_traced(p)) {
            invoked[t.outcome.test] = t.invoked;
        }
        for (Operator op : kAllOperators) {
            for (const auto& m : sample_mutants(p, op, 40, 3).mutants) {
                for (const auto& t : compute_record(p, m, g).ais) {
                    EXPECT_TRUE(invoked[t].contains(m.site.function)) << path << " " << m.id << " " << t;
                }
            }
        }
    }
}

TEST(Record, IntegrityChecks) {
    const Program p = fixture::multiplier_program();
    const auto sites = enumerate_sites(p, Operator::AOR);
    const Mutant mutant{mutant_id(sites[0]), program_hash(p), sites[0], apply_mutation(p, sites[0])};
    CallGraphBuilder b;
    b.add_node({"test_mul", "test_mul", NodeKind::Test});
    EXPECT_THROW(compute_record(p, mutant, b.build()), IntegrityError);

    Mutant foreign = mutant;
    foreign.base_hash = std::string(64, '0');
    EXPECT_THROW(compute_record(p, foreign, extract_call_graph(p, false)), IntegrityError);
}

TEST(Baseline, RedSuiteRefused) {
    EXPECT_THROW(require_green_baseline(parse("fn test_bad(){ assert(1 == 2) }")), BaselineError);
    EXPECT_NO_THROW(require_green_baseline(fixture::multiplier_program()));
}
