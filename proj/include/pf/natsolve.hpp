#ifndef PF_NATSOLVE_HPP
#define PF_NATSOLVE_HPP

#include <map>
#include <string>
#include <vector>

#include "pf/diagnostics.hpp"
#include "pf/graph.hpp"

namespace pf {

/// Arithmetic term over replica-count variables and natural constants.
/// Plain value type; copying copies the tree.
class CountTerm {
public:
    enum class Kind { Constant, Variable, Add, Sub, Mul };

    static CountTerm constant(long long v);
    static CountTerm variable(std::string name);
    static CountTerm add(CountTerm l, CountTerm r);
    static CountTerm sub(CountTerm l, CountTerm r);
    static CountTerm mul(CountTerm l, CountTerm r);

    Kind kind() const { return kind_; }
    long long value() const { return value_; }
    const std::string& var() const { return var_; }
    const CountTerm& lhs() const { return children_.at(0); }
    const CountTerm& rhs() const { return children_.at(1); }

    /// Evaluates under the assignment; unknown variables raise PfError.
    /// Subtraction is over the integers (no truncation at zero).
    long long evaluate(const std::map<std::string, long long>& a) const;

    /// Appends variables in first-appearance order, skipping seen ones.
    void collect_variables(std::vector<std::string>& out) const;

    std::string to_string() const;

private:
    Kind kind_ = Kind::Constant;
    long long value_ = 0;
    std::string var_;
    std::vector<CountTerm> children_;
};

/// One relation `lhs op rhs` between two count terms.
struct CountRelation {
    CountTerm lhs;
    RelOp op = RelOp::Eq;
    CountTerm rhs;

    std::string display() const;
};

using ReplicaAssignment = std::map<std::string, long long>;

bool evaluate(const CountRelation& rel, const ReplicaAssignment& a);

/// A conjunction of count relations solved over the naturals by bounded
/// exhaustive search.
class EquationSystem {
public:
    explicit EquationSystem(std::vector<CountRelation> relations,
                            std::vector<std::string> extra_vars = {});

    const std::vector<CountRelation>& relations() const { return relations_; }

    /// Variables in first-appearance order (relations left to right,
    /// each relation lhs before rhs), then unseen extras.
    const std::vector<std::string>& variables() const { return variables_; }

    /// All assignments with every variable in [0, bound] satisfying all
    /// relations, in lexicographic order of the variable tuple. When
    /// `max_solutions` is nonzero the enumeration stops after that many.
    std::vector<ReplicaAssignment> enumerate_solutions(
        long long bound, std::size_t max_solutions = 0) const;

    /// The Pareto-minimal elements of enumerate_solutions(bound): no
    /// other solution is componentwise <= and different.
    std::vector<ReplicaAssignment> minimal_solutions(long long bound) const;

    bool satisfied_by(const ReplicaAssignment& a) const;

private:
    std::vector<CountRelation> relations_;
    std::vector<std::string> variables_;
    // relations_ indices grouped by the last variable they mention (in
    // variables_ order); used to prune the search as early as possible.
    std::vector<std::vector<std::size_t>> ready_at_;
    std::vector<std::size_t> ground_relations_;
};

} // namespace pf

#endif // PF_NATSOLVE_HPP
