#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/minilang/ast.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace impactlab::minilang {

/// One node per function. Direct calls give plain edges. With `with_cha`,
/// every virtual call on interface I adds a via_cha edge to each
/// implementor of I; without it virtual calls contribute nothing.
CallGraph extract_call_graph(const Program& program, bool with_cha);

enum class TestStatus { Pass, Fail };
enum class FailReason { AssertionFailed, DivisionByZero, StepLimitExceeded };

std::string_view to_string(FailReason reason);

struct TestOutcome {
    std::string test;
    TestStatus status = TestStatus::Pass;
    std::optional<FailReason> reason;

    bool passed() const { return status == TestStatus::Pass; }
    bool operator==(const TestOutcome&) const = default;
};

struct RunOptions {
    /// Expression evaluations allowed per test.
    std::uint64_t step_budget = 100'000;
    /// Nested call limit per test; exceeding it counts as running out of steps.
    std::size_t max_call_depth = 1'000;
};

/// Runs every test function in declaration order. Runtime errors become Fail
/// outcomes. Virtual calls dispatch to the first declared implementor.
std::vector<TestOutcome> run_tests(const Program& program, const RunOptions& options = {});

struct TestTrace {
    TestOutcome outcome;
    /// Functions entered during the test, including the test itself.
    std::set<std::string> invoked;
    /// Dynamically observed (caller, callee) pairs.
    std::set<std::pair<std::string, std::string>> calls;
};

/// run_tests with call-trace instrumentation.
std::vector<TestTrace> run_tests_traced(const Program& program, const RunOptions& options = {});

} // namespace impactlab::minilang
