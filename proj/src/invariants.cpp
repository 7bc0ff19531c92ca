#include "lugsi/invariants.hpp"

#include "lugsi/error.hpp"

#include <string>

namespace lugsi {

namespace {

void check_measure(const measure_spec &measure) {
    if (measure.type == measure_spec::kind::empirical && (!measure.reference_points || measure.reference_points->rows() == 0)) {
        throw usage_error{ "empirical measure needs at least one reference point" };
    }
}

void check_unit_cube(const Eigen::Ref<const Eigen::RowVectorXd> &point) {
    if ((point.array() < 0.0).any() || (point.array() > 1.0).any()) {
        throw usage_error{ "point outside the unit cube; scale the data first" };
    }
}

bool dominates(const matrix &references, Eigen::Index s, const Eigen::Ref<const Eigen::RowVectorXd> &point) {
    for (Eigen::Index j = 0; j < point.size(); ++j) {
        if (references(s, j) < point[j]) {
            return false;
        }
    }
    return true;
}

void check_alignment(const dataset &data, const granulation &granules) {
    if (granules.assignments.size() != data.size()) {
        throw usage_error{ "granulation does not match the dataset size" };
    }
}

}  // namespace

double v_value(const Eigen::Ref<const Eigen::RowVectorXd> &point, const measure_spec &measure) {
    check_measure(measure);
    if (measure.type == measure_spec::kind::uniform_unit_cube) {
        check_unit_cube(point);
        double product = 1.0;
        for (Eigen::Index j = 0; j < point.size(); ++j) {
            product *= 1.0 - point[j];
        }
        return product;
    }
    const matrix &references = *measure.reference_points;
    if (references.cols() != point.size()) {
        throw usage_error{ "dimension mismatch between point and reference points" };
    }
    std::size_t count = 0;
    for (Eigen::Index s = 0; s < references.rows(); ++s) {
        count += dominates(references, s, point) ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(references.rows());
}

vector v_values(const matrix &points, const measure_spec &measure) {
    vector out(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out[i] = v_value(points.row(i), measure);
    }
    return out;
}

std::vector<granule_invariant> granule_invariants_from_values(const dataset &data, const granulation &granules, const vector &values) {
    check_alignment(data, granules);
    std::vector<granule_invariant> out;
    out.reserve(granules.granule_count());
    for (std::size_t k = 0; k < granules.granule_count(); ++k) {
        const auto &members = granules.granule_members[k];
        granule_invariant inv{ k, vector(static_cast<Eigen::Index>(members.size())), 0.0 };
        for (std::size_t p = 0; p < members.size(); ++p) {
            const auto i = static_cast<Eigen::Index>(members[p]);
            inv.v[static_cast<Eigen::Index>(p)] = values[i];
            inv.target += values[i] * data.labels()[i];
        }
        out.push_back(std::move(inv));
    }
    return out;
}

std::vector<granule_invariant> granule_v_vectors(const dataset &data, const granulation &granules, const measure_spec &measure) {
    check_alignment(data, granules);
    return granule_invariants_from_values(data, granules, v_values(data.features(), measure));
}

std::vector<granule_invariant> unit_granule_invariants(const dataset &data, const granulation &granules) {
    return granule_invariants_from_values(data, granules, vector::Ones(static_cast<Eigen::Index>(data.size())));
}

Eigen::MatrixXd v_matrix(const matrix &points, const measure_spec &measure, std::size_t cap) {
    check_measure(measure);
    const auto l = static_cast<std::size_t>(points.rows());
    if (l > cap) {
        throw numeric_error{ "V-matrix for " + std::to_string(l) + " samples exceeds the cap of " + std::to_string(cap) + " (raise the cap or use granule invariants)" };
    }
    const Eigen::Index size = points.rows();
    Eigen::MatrixXd v(size, size);
    if (measure.type == measure_spec::kind::uniform_unit_cube) {
        for (Eigen::Index i = 0; i < size; ++i) {
            check_unit_cube(points.row(i));
        }
        for (Eigen::Index i = 0; i < size; ++i) {
            for (Eigen::Index j = i; j < size; ++j) {
                double product = 1.0;
                for (Eigen::Index k = 0; k < points.cols(); ++k) {
                    product *= 1.0 - std::max(points(i, k), points(j, k));
                }
                v(i, j) = product;
                v(j, i) = product;
            }
        }
        return v;
    }

    const matrix &references = *measure.reference_points;
    if (references.cols() != points.cols()) {
        throw usage_error{ "dimension mismatch between points and reference points" };
    }
    // Column s of the indicator matrix marks the points dominated by reference s.
    Eigen::MatrixXd indicator(size, references.rows());
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index s = 0; s < references.rows(); ++s) {
            indicator(i, s) = dominates(references, s, points.row(i)) ? 1.0 : 0.0;
        }
    }
    v.noalias() = indicator * indicator.transpose();
    v /= static_cast<double>(references.rows());
    return v;
}

}  // namespace lugsi
