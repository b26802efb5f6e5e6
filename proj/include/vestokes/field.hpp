#pragma once

// Spatial fields over a box [0,Lx]x[0,Ly]x[0,Lz]: scalar viscosity
// parameters mu_i(x) and the symmetric tensor field B(x).

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vestokes/expression.hpp"
#include "vestokes/tensor.hpp"

namespace vestokes {

/// Nodal data on a uniform grid with nodes at i*L/(n-1). Record order is
/// row-major over (ix, iy, iz): z varies fastest.
struct GridData {
    std::array<int, 3> nodes{2, 2, 2};
    Vec3 lengths{1.0, 1.0, 1.0};
    std::vector<double> values;

    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * nodes[1] + iy) * nodes[2] + iz;
    }
    double spacing(int axis) const { return lengths[axis] / (nodes[axis] - 1); }
    Vec3 position(int ix, int iy, int iz) const {
        return {ix * spacing(0), iy * spacing(1), iz * spacing(2)};
    }
    std::size_t size() const {
        return static_cast<std::size_t>(nodes[0]) * nodes[1] * nodes[2];
    }
};

/// Real-valued field: constant, closed-form expression, or sampled grid
/// (trilinear interpolation, second-order finite differences).
class ScalarField {
public:
    enum class Kind { Constant, Expression, Grid };

    ScalarField();  // constant zero
    static ScalarField constant(double value);
    static ScalarField expression(Expr e);
    static ScalarField expression(const std::string& text);
    static ScalarField grid(GridData data);

    Kind kind() const;
    bool is_constant() const { return kind() == Kind::Constant; }
    /// Value when constant.
    double constant_value() const;
    /// Human-readable description for reports.
    std::string describe() const;

    double value(const Vec3& x) const;
    double operator()(const Vec3& x) const { return value(x); }

    /// Partial derivative as a new field. Throws NonDifferentiableField when
    /// the representation has no derivative.
    ScalarField diff(int axis) const;

    /// Cached first/second derivatives.
    Vec3 gradient(const Vec3& x) const;
    /// Symmetric Hessian.
    Mat3 hessian(const Vec3& x) const;

private:
    struct Impl;
    explicit ScalarField(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

/// Symmetric-tensor field with six component fields in slot order
/// (a11, a22, a33, a12, a13, a23).
class TensorField {
public:
    TensorField();  // identity everywhere
    explicit TensorField(std::array<ScalarField, 6> components);
    static TensorField constant(const SymTensor3& value);
    static TensorField expression(const std::array<std::string, 6>& texts);

    const std::array<ScalarField, 6>& components() const { return c_; }
    bool is_constant() const;
    std::string describe() const;

    SymTensor3 value(const Vec3& x) const;
    SymTensor3 operator()(const Vec3& x) const { return value(x); }
    SymTensor3 derivative(const Vec3& x, int axis) const;
    SymTensor3 second_derivative(const Vec3& x, int i, int j) const;
    TensorField diff(int axis) const;

private:
    std::array<ScalarField, 6> c_;
};

using VectorFn = std::function<Vec3(const Vec3&)>;

/// Vector field from three scalar fields.
VectorFn make_vector_fn(std::array<ScalarField, 3> components);

/// The three viscosity parameters as spatial fields.
struct MuFields {
    ScalarField mu1, mu2, mu3;

    static MuFields constant(double m1, double m2, double m3);
    bool is_constant() const { return mu1.is_constant() && mu2.is_constant() && mu3.is_constant(); }
};

/// Points with quadrature-style weights; sup-norms become maxima over the
/// points and L^p norms weighted sums.
struct SampleSet {
    std::vector<Vec3> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    /// Midpoint rule on an n0 x n1 x n2 cell grid.
    static SampleSet cell_centers(const std::array<int, 3>& cells, const Vec3& lengths);
};

/// Grid file: header `nx ny nz Lx Ly Lz`, then `components` whitespace
/// separated numbers per node in GridData record order.
struct GridFile {
    std::array<int, 3> nodes{};
    Vec3 lengths{};
    int components = 0;
    std::vector<double> values;  // node-major, components contiguous
};

GridFile read_grid_file(const std::filesystem::path& path);
void write_grid_file(const std::filesystem::path& path, const GridFile& file);

/// Sample a tensor field onto grid nodes.
GridFile sample_tensor_grid(const TensorField& field, const std::array<int, 3>& nodes, const Vec3& lengths);

ScalarField scalar_field_from_grid_file(const GridFile& file);
TensorField tensor_field_from_grid_file(const GridFile& file);

}  // namespace vestokes
