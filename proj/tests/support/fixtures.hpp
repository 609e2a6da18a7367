#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/minilang/syntax.hpp"

#include <string>
#include <vector>

namespace fixture {

using namespace impactlab;

inline std::string corpus_path(const std::string& name) {
    return std::string(IMPACTLAB_CORPUS_DIR) + "/" + name;
}

inline std::vector<std::string> corpus_files() {
    return {corpus_path("multiplier.mini"), corpus_path("shapes.mini"), corpus_path("numeric.mini"),
            corpus_path("logic.mini"), corpus_path("ledger.mini")};
}

/// Four methods with one test each; op reaches mul only through an
/// interface, so there is no op -> mul edge.
inline CallGraph multiplier() {
    CallGraphBuilder b;
    for (const char* app : {"mul", "pow", "fac", "op"}) {
        b.add_node({app, app, NodeKind::Application});
    }
    for (const char* t : {"test_mul", "test_pow", "test_fac", "test_op"}) {
        b.add_node({t, t, NodeKind::Test});
    }
    b.add_edge({"test_mul", "mul"})
        .add_edge({"test_pow", "pow"})
        .add_edge({"test_fac", "fac"})
        .add_edge({"test_op", "op"})
        .add_edge({"pow", "mul"})
        .add_edge({"fac", "mul"});
    return b.build();
}

inline minilang::Program multiplier_program() {
    return minilang::parse_file(corpus_path("multiplier.mini"));
}

} // namespace fixture
