#ifndef PF_MATCHER_HPP
#define PF_MATCHER_HPP

#include <functional>
#include <memory>
#include <optional>

#include "pf/expansion.hpp"
#include "pf/match.hpp"
#include "pf/pattern.hpp"

namespace pf {

struct RoleBinding {
    std::string element; // model element id
    std::string role;
    std::string part;
    long long replica = 0;
};

/// One pattern instance found in a model: the expansion member that
/// witnessed it and its injective embedding into the model.
struct Occurrence {
    std::string pattern_name;
    ReplicaAssignment assignment;
    std::shared_ptr<const Expansion> expansion;
    GraphMorphism embedding; // expansion graph -> model
    std::vector<RoleBinding> role_bindings;
    std::set<std::string> image_nodes;
    std::set<std::string> image_edges;
};

enum class MatchMode { Satisfy, FindAll, FindMaximal };

struct MatchConfig {
    long long replica_bound = 8;
    std::size_t max_occurrences = 0; // 0 = unlimited
    MatchMode mode = MatchMode::FindAll;
    bool check_constraints = true;
};

struct ConstraintViolation {
    std::string pattern;
    std::string label;
    std::string anchor_part;
    long long anchor_replica = 0;
    std::string message;
    std::vector<std::string> witness_nodes; // model ids of the offending context
};

struct SatisfyResult {
    bool satisfied = false; // some expansion member embeds
    bool clean = false;     // ... and some witness passes all constraints
    std::optional<Occurrence> witness;
    std::vector<ConstraintViolation> violations; // of the reported witness
    bool inconclusive_beyond_bound = false;
};

struct FindResult {
    std::vector<Occurrence> occurrences;
    bool truncated = false;
    bool inconclusive_beyond_bound = false;
};

/// Does the model contain the pattern? Tries the minimal solutions of
/// the replication system (existence of an embedding is downward closed
/// in the counts, so that is enough) and prefers a witness without
/// constraint violations; otherwise the first witness found is reported
/// together with its violations.
SatisfyResult satisfies(GraphPtr model, const Pattern& p, const MatchConfig& cfg = {});

/// All occurrences across every in-bound count assignment, deduplicated
/// by image; FindMaximal additionally drops occurrences whose image is
/// strictly contained in another's. With check_constraints, occurrences
/// violating a constraint are dropped.
FindResult find_occurrences(GraphPtr model, const Pattern& p, const MatchConfig& cfg = {});

/// Occurrences for one fixed count assignment (no cross-assignment
/// deduplication); building block of find_occurrences and the test
/// oracles.
std::vector<Occurrence> find_occurrences_at(GraphPtr model, const Pattern& p,
                                            const ReplicaAssignment& assignment,
                                            std::size_t max_occurrences = 0);

/// Evaluates every constraint against one occurrence: premises are
/// sought per anchor replica, extensions anywhere in the model.
std::vector<ConstraintViolation> check_constraint_violations(GraphPtr model,
                                                             const Occurrence& occ,
                                                             const Pattern& p);

struct RootCardinalityReport {
    long long count = 0; // distinct root-part occurrences by image
    std::vector<std::pair<std::string, bool>> relation_results;
    bool ok = true;
};

/// Counts how often the root part occurs (distinct images) and checks
/// the pattern-name relations against that count.
RootCardinalityReport check_root_cardinality(GraphPtr model, const Pattern& p);

struct SyncReport {
    bool ok = false;
    bool primary_satisfied = false;
    std::map<std::string, bool> secondary_satisfied;
    std::optional<ReplicaAssignment> joint_assignment;
    std::vector<std::string> notes;
};

/// Checks a synchronized set: some combination of occurrences (primary
/// in its model, each companion in its own) must satisfy the joint
/// replication system, and every link's elements must agree on the
/// variables the linked nodes share.
SyncReport check_sync(GraphPtr primary_model,
                      const std::map<std::string, GraphPtr>& secondary_models,
                      const SynchronizedPatternSet& set, const MatchConfig& cfg = {});

} // namespace pf

#endif // PF_MATCHER_HPP
