#include "impactlab/dataset.hpp"
#include "impactlab/error.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace impactlab;

namespace {

MutationDataset parse_dataset(const std::string& text) {
    std::istringstream in(text);
    return load_dataset(in);
}

} // namespace

TEST(DatasetIo, RoundTripAndShape) {
    MutationDataset ds{"abc", {{"mul@0:AOR:add", "mul", "AOR", {"test_pow", "test_mul"}}, {"x", "fac", "ROR", {}}}};
    const std::string text = save_dataset(ds);
    EXPECT_EQ(text, "{\"format\":\"cig-mutations\",\"version\":1,\"graph_hash\":\"abc\"}\n"
                    "{\"record\":{\"mutant\":\"mul@0:AOR:add\",\"m\":\"mul\",\"op\":\"AOR\",\"ais\":[\"test_mul\","
                    "\"test_pow\"]}}\n"
                    "{\"record\":{\"mutant\":\"x\",\"m\":\"fac\",\"op\":\"ROR\",\"ais\":[]}}\n");
    EXPECT_EQ(parse_dataset(text), ds);
}

TEST(DatasetIo, Errors) {
    EXPECT_THROW(parse_dataset(""), ParseError);
    EXPECT_THROW(parse_dataset("{\"format\":\"cig-graph\",\"version\":1}\n"), ParseError);
    try {
        parse_dataset("{\"format\":\"cig-mutations\",\"version\":1,\"graph_hash\":\"\"}\n\n{\"record\":{}}\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(DatasetIo, Validation) {
    const CallGraph g = fixture::multiplier();
    const std::vector<MutationRecord> good{{"a", "mul", "AOR", {"test_op"}}};
    EXPECT_NO_THROW(validate_records(g, good));
    EXPECT_THROW(validate_records(g, std::vector<MutationRecord>{{"a", "ghost", "AOR", {}}}), IntegrityError);
    EXPECT_THROW(validate_records(g, std::vector<MutationRecord>{{"a", "test_mul", "AOR", {}}}), IntegrityError);
    EXPECT_THROW(validate_records(g, std::vector<MutationRecord>{{"a", "mul", "AOR", {"pow"}}}), IntegrityError);
    EXPECT_THROW(validate_records(g, std::vector<MutationRecord>{{"a", "mul", "AOR", {"nope"}}}), IntegrityError);
}
