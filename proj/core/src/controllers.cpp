#include "socnav/controllers.hpp"

#include <sstream>
#include <stdexcept>

namespace socnav {

bool constraint_is_adaptive(ConstraintType c) {
    return c == ConstraintType::aedc || c == ConstraintType::amdc ||
           c == ConstraintType::aelc;
}

bool constraint_uses_covariance(ConstraintType c) {
    return c == ConstraintType::mdc || c == ConstraintType::amdc ||
           c == ConstraintType::elc || c == ConstraintType::aelc;
}

namespace {

struct CatalogRow {
    const char* name;
    CostComponent cost;
    ConstraintType constraint;
    double gamma;
};

// Catalog order is the results-table order.
constexpr CatalogRow kCatalog[] = {
    {"ED-MPC", CostComponent::euclidean, ConstraintType::none, 0.0},
    {"ED-MPC-EDC", CostComponent::euclidean, ConstraintType::edc, 0.0},
    {"ED-MPC-MDC", CostComponent::euclidean, ConstraintType::mdc, 0.0},
    {"MD-MPC-MDC", CostComponent::mahalanobis, ConstraintType::mdc, 0.0},
    {"MD-MPC-EDC", CostComponent::mahalanobis, ConstraintType::edc, 0.0},
    {"ED-MPC-AEDC", CostComponent::euclidean, ConstraintType::aedc, 0.0},
    {"MD-MPC-AEDC", CostComponent::mahalanobis, ConstraintType::aedc, 0.0},
    {"MPC-AEDC", CostComponent::none, ConstraintType::aedc, 0.0},
    {"MPC-AMDC", CostComponent::none, ConstraintType::amdc, 0.0},
    {"MPC-ELC-2", CostComponent::none, ConstraintType::elc, 2.0},
    {"MPC-ELC-3", CostComponent::none, ConstraintType::elc, 3.0},
    {"MPC-AELC-2", CostComponent::none, ConstraintType::aelc, 2.0},
    {"MPC-AELC-3", CostComponent::none, ConstraintType::aelc, 3.0},
};

ControllerSpec assemble(const std::string& name, CostComponent cost,
                        ConstraintType constraint, double gamma,
                        const ControllerDefaults& defaults) {
    ControllerSpec spec;
    spec.name = name;
    spec.cost = cost;
    spec.constraint = constraint;
    spec.gamma = gamma;
    spec.weights = defaults.weights;
    spec.weights.q_r = cost == CostComponent::euclidean ? defaults.q_r_euclidean
                                                        : defaults.q_r_otherwise;
    spec.geometry = defaults.geometry;
    return spec;
}

}  // namespace

const std::vector<std::string>& list_paper_controllers() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const CatalogRow& row : kCatalog) v.emplace_back(row.name);
        return v;
    }();
    return names;
}

ControllerSpec build_named(const std::string& name, const ControllerDefaults& defaults) {
    for (const CatalogRow& row : kCatalog) {
        if (name == row.name) {
            ControllerSpec spec = assemble(name, row.cost, row.constraint, row.gamma, defaults);
            spec.paper_variant = true;
            return spec;
        }
    }
    std::ostringstream msg;
    msg << "unknown controller '" << name << "'; valid names:";
    for (const CatalogRow& row : kCatalog) msg << ' ' << row.name;
    throw std::invalid_argument(msg.str());
}

ControllerSpec make_custom_spec(const std::string& name, CostComponent cost,
                                ConstraintType constraint, double gamma,
                                const ControllerDefaults& defaults) {
    if ((constraint == ConstraintType::elc || constraint == ConstraintType::aelc) &&
        gamma <= 0.0) {
        throw std::invalid_argument("ellipsoid constraints need gamma > 0");
    }
    ControllerSpec spec = assemble(name, cost, constraint, gamma, defaults);
    spec.paper_variant = false;
    return spec;
}

}  // namespace socnav
