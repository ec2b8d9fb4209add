#ifndef CBMO_POLYNOMIAL_HPP
#define CBMO_POLYNOMIAL_HPP

#include <cbmo/error.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace cbmo::analytics {

/// Additive per-feature polynomial:
///   y = c0 + sum_j sum_{p=1..degree} c[1 + j*degree + (p-1)] * x_j^p
/// No cross terms.
struct PolyModel {
    std::size_t degree = 0;
    std::size_t features = 0;
    std::vector<double> coefficients;

    double intercept() const { return coefficients.at(0); }
    double coefficient(std::size_t feature, std::size_t power) const
    {
        return coefficients.at(1 + feature * degree + (power - 1));
    }

    friend bool operator==(const PolyModel&, const PolyModel&) = default;
};

/// Design matrix [1, x_1 .. x_1^d, x_2 .. x_2^d, ...].
inline Eigen::MatrixXd polynomial_basis(const Eigen::MatrixXd& x, std::size_t degree)
{
    const auto rows = x.rows();
    const auto features = static_cast<std::size_t>(x.cols());
    Eigen::MatrixXd basis(rows, static_cast<Eigen::Index>(1 + features * degree));
    basis.col(0).setOnes();
    for (std::size_t j = 0; j < features; ++j) {
        Eigen::VectorXd power = Eigen::VectorXd::Ones(rows);
        for (std::size_t p = 1; p <= degree; ++p) {
            power = power.cwiseProduct(x.col(static_cast<Eigen::Index>(j)));
            basis.col(static_cast<Eigen::Index>(1 + j * degree + (p - 1))) = power;
        }
    }
    return basis;
}

inline Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, std::size_t cols)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorCode::DimensionMismatch, "ragged feature rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

/// Least-squares fit; the minimum-norm solution when the basis is rank
/// deficient (fewer rows than coefficients, constant columns).
inline PolyModel fit_polynomial(const Eigen::MatrixXd& x, std::span<const double> y, std::size_t degree)
{
    if (x.rows() == 0 || y.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no rows to fit");
    }
    if (static_cast<std::size_t>(x.rows()) != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "feature rows and targets differ in length");
    }
    if (degree < 1) {
        throw Error(ErrorCode::InvalidConfig, "polynomial degree must be at least 1");
    }
    const Eigen::MatrixXd basis = polynomial_basis(x, degree);
    const Eigen::Map<const Eigen::VectorXd> target(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd solution = basis.completeOrthogonalDecomposition().solve(target);

    PolyModel model;
    model.degree = degree;
    model.features = static_cast<std::size_t>(x.cols());
    model.coefficients.assign(solution.data(), solution.data() + solution.size());
    return model;
}

inline std::vector<double> predict_polynomial(const PolyModel& model, const Eigen::MatrixXd& x)
{
    if (static_cast<std::size_t>(x.cols()) != model.features
        || model.coefficients.size() != 1 + model.features * model.degree) {
        throw Error(ErrorCode::DimensionMismatch, "feature count does not match the model");
    }
    std::vector<double> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double y = model.coefficients[0];
        for (std::size_t j = 0; j < model.features; ++j) {
            const double xj = x(r, static_cast<Eigen::Index>(j));
            double power = 1.0;
            for (std::size_t p = 1; p <= model.degree; ++p) {
                power *= xj;
                y += model.coefficients[1 + j * model.degree + (p - 1)] * power;
            }
        }
        out[static_cast<std::size_t>(r)] = y;
    }
    return out;
}

} // namespace cbmo::analytics

#endif // CBMO_POLYNOMIAL_HPP
