#include "impactlab/minilang/analysis.hpp"

#include <limits>
#include <unordered_map>

namespace impactlab::minilang {

std::string_view to_string(FailReason reason) {
    switch (reason) {
    case FailReason::AssertionFailed: return "assertion-failed";
    case FailReason::DivisionByZero: return "division-by-zero";
    case FailReason::StepLimitExceeded: return "step-limit-exceeded";
    }
    return "?";
}

namespace {

struct Fault {
    FailReason reason;
};

// Two's-complement wrapping arithmetic on 64-bit values.
std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Interpreter {
public:
    Interpreter(const Program& program, const RunOptions& options, TestTrace* trace)
        : program_(program), options_(options), trace_(trace) {
        for (const auto& f : program.functions) {
            functions_.emplace(f.name, &f);
        }
    }

    void run_test(const FunctionDef& test) {
        steps_ = 0;
        depth_ = 0;
        if (trace_) {
            trace_->invoked.insert(test.name);
        }
        Frame frame{&test, {}};
        eval(*test.body, frame);
    }

private:
    struct Frame {
        const FunctionDef* fn;
        std::vector<std::int64_t> args;
    };

    std::int64_t eval(const Expr& e, const Frame& frame) {
        if (++steps_ > options_.step_budget) {
            throw Fault{FailReason::StepLimitExceeded};
        }
        switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
            return e.value;
        case ExprKind::Var:
            for (std::size_t i = 0; i < frame.fn->params.size(); ++i) {
                if (frame.fn->params[i] == e.name) {
                    return frame.args[i];
                }
            }
            return 0; // unreachable for validated programs
        case ExprKind::Arith:
            return arith_op(e.arith, eval(e.child(0), frame), eval(e.child(1), frame));
        case ExprKind::Logic: {
            const bool lhs = eval(e.child(0), frame) != 0;
            if (e.logic == LogicOp::And) {
                return lhs ? (eval(e.child(1), frame) != 0) : 0;
            }
            return lhs ? 1 : (eval(e.child(1), frame) != 0);
        }
        case ExprKind::Rel: {
            const std::int64_t a = eval(e.child(0), frame);
            const std::int64_t b = eval(e.child(1), frame);
            switch (e.rel) {
            case RelOp::Lt: return a < b;
            case RelOp::Le: return a <= b;
            case RelOp::Gt: return a > b;
            case RelOp::Ge: return a >= b;
            case RelOp::Eq: return a == b;
            case RelOp::Ne: return a != b;
            }
            return 0;
        }
        case ExprKind::Not:
            return eval(e.child(0), frame) == 0;
        case ExprKind::Neg:
            return wrap_sub(0, eval(e.child(0), frame));
        case ExprKind::Abs: {
            const std::int64_t v = eval(e.child(0), frame);
            return v < 0 ? wrap_sub(0, v) : v;
        }
        case ExprKind::If:
            return eval(e.child(0), frame) != 0 ? eval(e.child(1), frame) : eval(e.child(2), frame);
        case ExprKind::Call:
            return invoke(*functions_.at(e.name), e, frame);
        case ExprKind::VCall:
            return invoke(*functions_.at(program_.interfaces.at(e.name).front()), e, frame);
        case ExprKind::Assert:
            if (eval(e.child(0), frame) == 0) {
                throw Fault{FailReason::AssertionFailed};
            }
            return 1;
        case ExprKind::Seq:
            eval(e.child(0), frame);
            return eval(e.child(1), frame);
        }
        return 0;
    }

    static std::int64_t arith_op(ArithOp op, std::int64_t a, std::int64_t b) {
        switch (op) {
        case ArithOp::Add: return wrap_add(a, b);
        case ArithOp::Sub: return wrap_sub(a, b);
        case ArithOp::Mul: return wrap_mul(a, b);
        case ArithOp::Div:
        case ArithOp::Mod:
            if (b == 0) {
                throw Fault{FailReason::DivisionByZero};
            }
            if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
                return op == ArithOp::Div ? a : 0;
            }
            return op == ArithOp::Div ? a / b : a % b;
        }
        return 0;
    }

    std::int64_t invoke(const FunctionDef& callee, const Expr& site, const Frame& frame) {
        Frame next{&callee, {}};
        next.args.reserve(site.children.size());
        for (const auto& arg : site.children) {
            next.args.push_back(eval(*arg, frame));
        }
        if (trace_) {
            trace_->invoked.insert(callee.name);
            trace_->calls.emplace(frame.fn->name, callee.name);
        }
        if (++depth_ > options_.max_call_depth) {
            throw Fault{FailReason::StepLimitExceeded};
        }
        const std::int64_t result = eval(*callee.body, next);
        --depth_;
        return result;
    }

    const Program& program_;
    const RunOptions& options_;
    TestTrace* trace_;
    std::unordered_map<std::string, const FunctionDef*> functions_;
    std::uint64_t steps_ = 0;
    std::size_t depth_ = 0;
};

TestOutcome run_one(const Program& program, const FunctionDef& test, const RunOptions& options,
                    TestTrace* trace) {
    TestOutcome outcome{test.name, TestStatus::Pass, std::nullopt};
    try {
        Interpreter(program, options, trace).run_test(test);
    } catch (const Fault& fault) {
        outcome.status = TestStatus::Fail;
        outcome.reason = fault.reason;
    }
    return outcome;
}

} // namespace

std::vector<TestOutcome> run_tests(const Program& program, const RunOptions& options) {
    std::vector<TestOutcome> out;
    for (const FunctionDef* test : program.tests()) {
        out.push_back(run_one(program, *test, options, nullptr));
    }
    return out;
}

std::vector<TestTrace> run_tests_traced(const Program& program, const RunOptions& options) {
    std::vector<TestTrace> out;
    for (const FunctionDef* test : program.tests()) {
        TestTrace trace;
        trace.outcome = run_one(program, *test, options, &trace);
        out.push_back(std::move(trace));
    }
    return out;
}

} // namespace impactlab::minilang
