#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace ckg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Axis-aligned box design space.
struct BoxDomain {
    Vector lower;
    Vector upper;

    BoxDomain() = default;
    BoxDomain(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size() || lower.size() < 1)
            throw std::invalid_argument("BoxDomain: bound length mismatch");
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument("BoxDomain: lower must be < upper");
    }

    int dim() const { return static_cast<int>(lower.size()); }

    bool contains(const Vector& x, double tol = 1e-12) const {
        if (x.size() != lower.size()) return false;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
        return true;
    }

    Vector clamp(Vector x) const {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = std::min(std::max(x[i], lower[i]), upper[i]);
        return x;
    }

    // Map a point to [0,1]^d and back.
    Vector to_unit(const Vector& x) const {
        return (x - lower).cwiseQuotient(upper - lower);
    }
    Vector from_unit(const Vector& u) const {
        return lower + u.cwiseProduct(upper - lower);
    }

    static BoxDomain unit_cube(int d) {
        return BoxDomain(Vector::Zero(d), Vector::Ones(d));
    }
};

} // namespace ckg
