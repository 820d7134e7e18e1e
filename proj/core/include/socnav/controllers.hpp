#pragma once

#include <string>
#include <vector>

#include "socnav/socialcost.hpp"

namespace socnav {

enum class CostComponent { none, euclidean, mahalanobis };

enum class ConstraintType {
    none,
    edc,   ///< Euclidean distance
    mdc,   ///< Mahalanobis distance
    aedc,  ///< adaptive Euclidean
    amdc,  ///< adaptive Mahalanobis
    elc,   ///< ellipsoid iso-contour
    aelc,  ///< adaptive ellipsoid
};

bool constraint_is_adaptive(ConstraintType c);
bool constraint_uses_covariance(ConstraintType c);

/// Declarative assembly of one controller: a cost component plus a constraint
/// type, with the weights and geometry they act on.
struct ControllerSpec {
    std::string name;
    CostComponent cost = CostComponent::none;
    ConstraintType constraint = ConstraintType::none;
    double gamma = 0.0;  ///< stddev count for elc/aelc, 0 otherwise
    Weights weights;
    SafetyGeometry geometry;
    bool paper_variant = false;  ///< true iff built from the named catalog

    bool adaptive() const { return constraint_is_adaptive(constraint); }
};

/// Defaults that parameterize controller construction.
struct ControllerDefaults {
    Weights weights;                  ///< q_r is rewired per cost component
    SafetyGeometry geometry;
    double q_r_euclidean = 100.0;     ///< Q_r when the cost component is Euclidean
    double q_r_otherwise = 1000.0;
};

/// The 13 named controllers, in catalog order.
const std::vector<std::string>& list_paper_controllers();

/// Builds one of the 13 named controllers. Throws std::invalid_argument for
/// an unknown name, listing the valid ones.
ControllerSpec build_named(const std::string& name,
                           const ControllerDefaults& defaults = {});

/// Free-form assembly for experimentation; the result is labeled non-paper.
/// Adaptive constraints force the augmented control cost, so the usual
/// coupling invariant holds for these too.
ControllerSpec make_custom_spec(const std::string& name, CostComponent cost,
                                ConstraintType constraint, double gamma = 0.0,
                                const ControllerDefaults& defaults = {});

}  // namespace socnav
