#include "pf/natsolve.hpp"

#include <algorithm>
#include <set>

namespace pf {

CountTerm CountTerm::constant(long long v) {
    CountTerm t;
    t.kind_ = Kind::Constant;
    t.value_ = v;
    return t;
}

CountTerm CountTerm::variable(std::string name) {
    CountTerm t;
    t.kind_ = Kind::Variable;
    t.var_ = std::move(name);
    return t;
}

CountTerm CountTerm::add(CountTerm l, CountTerm r) {
    CountTerm t;
    t.kind_ = Kind::Add;
    t.children_.push_back(std::move(l));
    t.children_.push_back(std::move(r));
    return t;
}

CountTerm CountTerm::sub(CountTerm l, CountTerm r) {
    CountTerm t;
    t.kind_ = Kind::Sub;
    t.children_.push_back(std::move(l));
    t.children_.push_back(std::move(r));
    return t;
}

CountTerm CountTerm::mul(CountTerm l, CountTerm r) {
    CountTerm t;
    t.kind_ = Kind::Mul;
    t.children_.push_back(std::move(l));
    t.children_.push_back(std::move(r));
    return t;
}

long long CountTerm::evaluate(const std::map<std::string, long long>& a) const {
    switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::Variable: {
        auto it = a.find(var_);
        if (it == a.end()) throw PfError("unassigned count variable '" + var_ + "'");
        return it->second;
    }
    case Kind::Add: return lhs().evaluate(a) + rhs().evaluate(a);
    case Kind::Sub: return lhs().evaluate(a) - rhs().evaluate(a);
    case Kind::Mul: return lhs().evaluate(a) * rhs().evaluate(a);
    }
    throw PfError("corrupt count term");
}

void CountTerm::collect_variables(std::vector<std::string>& out) const {
    switch (kind_) {
    case Kind::Constant: return;
    case Kind::Variable:
        if (std::find(out.begin(), out.end(), var_) == out.end()) out.push_back(var_);
        return;
    default:
        lhs().collect_variables(out);
        rhs().collect_variables(out);
    }
}

std::string CountTerm::to_string() const {
    switch (kind_) {
    case Kind::Constant: return std::to_string(value_);
    case Kind::Variable: return var_;
    case Kind::Add: return lhs().to_string() + " + " + rhs().to_string();
    case Kind::Sub: {
        std::string r = rhs().to_string();
        if (rhs().kind_ == Kind::Add || rhs().kind_ == Kind::Sub) r = "(" + r + ")";
        return lhs().to_string() + " - " + r;
    }
    case Kind::Mul: {
        auto wrap = [](const CountTerm& t) {
            std::string s = t.to_string();
            if (t.kind_ == Kind::Add || t.kind_ == Kind::Sub) s = "(" + s + ")";
            return s;
        };
        return wrap(lhs()) + " * " + wrap(rhs());
    }
    }
    return "?";
}

std::string CountRelation::display() const {
    return lhs.to_string() + " " + rel_op_text(op) + " " + rhs.to_string();
}

bool evaluate(const CountRelation& rel, const ReplicaAssignment& a) {
    return eval_rel_op(rel.lhs.evaluate(a), rel.op, rel.rhs.evaluate(a));
}

EquationSystem::EquationSystem(std::vector<CountRelation> relations,
                               std::vector<std::string> extra_vars)
    : relations_(std::move(relations)) {
    for (const auto& rel : relations_) {
        if (rel.op == RelOp::Ne)
            throw PfError("count relations support <, <=, =, >, >= only");
        rel.lhs.collect_variables(variables_);
        rel.rhs.collect_variables(variables_);
    }
    for (auto& v : extra_vars)
        if (std::find(variables_.begin(), variables_.end(), v) == variables_.end())
            variables_.push_back(std::move(v));

    std::map<std::string, std::size_t> var_pos;
    for (std::size_t i = 0; i < variables_.size(); ++i) var_pos[variables_[i]] = i;
    ready_at_.resize(variables_.size());
    for (std::size_t r = 0; r < relations_.size(); ++r) {
        std::vector<std::string> vars;
        relations_[r].lhs.collect_variables(vars);
        relations_[r].rhs.collect_variables(vars);
        if (vars.empty()) {
            ground_relations_.push_back(r);
            continue;
        }
        std::size_t last = 0;
        for (const auto& v : vars) last = std::max(last, var_pos.at(v));
        ready_at_[last].push_back(r);
    }
}

std::vector<ReplicaAssignment> EquationSystem::enumerate_solutions(
    long long bound, std::size_t max_solutions) const {
    std::vector<ReplicaAssignment> out;
    if (bound < 0) return out;
    for (std::size_t r : ground_relations_)
        if (!evaluate(relations_[r], {})) return out;

    ReplicaAssignment current;
    auto recurse = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == variables_.size()) {
            out.push_back(current);
            return max_solutions == 0 || out.size() < max_solutions;
        }
        for (long long v = 0; v <= bound; ++v) {
            current[variables_[depth]] = v;
            bool feasible = true;
            for (std::size_t r : ready_at_[depth])
                if (!evaluate(relations_[r], current)) {
                    feasible = false;
                    break;
                }
            if (feasible && !self(self, depth + 1)) return false;
        }
        current.erase(variables_[depth]);
        return true;
    };
    recurse(recurse, 0);
    return out;
}

std::vector<ReplicaAssignment> EquationSystem::minimal_solutions(long long bound) const {
    std::vector<ReplicaAssignment> all = enumerate_solutions(bound);
    auto leq = [&](const ReplicaAssignment& a, const ReplicaAssignment& b) {
        for (const auto& v : variables_)
            if (a.at(v) > b.at(v)) return false;
        return true;
    };
    std::vector<ReplicaAssignment> minimal;
    for (const auto& cand : all) {
        bool dominated = false;
        for (const auto& other : all) {
            if (&other == &cand) continue;
            if (leq(other, cand) && !leq(cand, other)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(cand);
    }
    return minimal;
}

bool EquationSystem::satisfied_by(const ReplicaAssignment& a) const {
    for (const auto& rel : relations_)
        if (!evaluate(rel, a)) return false;
    return true;
}

} // namespace pf
