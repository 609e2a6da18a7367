#include "impactlab/minilang/analysis.hpp"

namespace impactlab::minilang {

namespace {

void collect_calls(const Expr& e, const std::string& caller, const Program& program, bool with_cha,
                   CallGraphBuilder& builder) {
    if (e.kind == ExprKind::Call) {
        builder.add_edge({caller, e.name, false});
    } else if (e.kind == ExprKind::VCall && with_cha) {
        for (const auto& impl : program.interfaces.at(e.name)) {
            builder.add_edge({caller, impl, true});
        }
    }
    for (const auto& c : e.children) {
        collect_calls(*c, caller, program, with_cha, builder);
    }
}

} // namespace

CallGraph extract_call_graph(const Program& program, bool with_cha) {
    CallGraphBuilder builder;
    for (const auto& f : program.functions) {
        builder.add_node({f.name, f.name, f.kind});
    }
    for (const auto& f : program.functions) {
        collect_calls(*f.body, f.name, program, with_cha, builder);
    }
    return builder.build();
}

} // namespace impactlab::minilang
