#include "vestokes/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>

#include "vestokes/errors.hpp"

namespace vestokes {

struct ScalarField::Impl {
    Kind kind = Kind::Constant;
    double constant = 0.0;
    Expr expr;
    CompiledExpr compiled;
    GridData grid;

    // Lazily built derivative fields: 3 first, 6 second (slot order).
    mutable std::once_flag once;
    mutable std::optional<std::array<ScalarField, 3>> grad;
    mutable std::optional<std::array<ScalarField, 6>> hess;
    mutable std::string deriv_error;
};

namespace {

double grid_value(const GridData& g, const Vec3& x) {
    std::array<int, 3> i0{};
    std::array<double, 3> t{};
    for (int a = 0; a < 3; ++a) {
        const double h = g.spacing(a);
        const double s = std::clamp(x[a], 0.0, g.lengths[a]) / h;
        int i = static_cast<int>(std::floor(s));
        i = std::clamp(i, 0, g.nodes[a] - 2);
        i0[a] = i;
        t[a] = s - i;
    }
    double r = 0.0;
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz) {
                const double w = (dx ? t[0] : 1.0 - t[0]) * (dy ? t[1] : 1.0 - t[1]) * (dz ? t[2] : 1.0 - t[2]);
                if (w != 0.0) r += w * g.values[g.index(i0[0] + dx, i0[1] + dy, i0[2] + dz)];
            }
    return r;
}

GridData grid_difference(const GridData& g, int axis) {
    GridData d = g;
    const int n = g.nodes[axis];
    const double h = g.spacing(axis);
    for (int ix = 0; ix < g.nodes[0]; ++ix)
        for (int iy = 0; iy < g.nodes[1]; ++iy)
            for (int iz = 0; iz < g.nodes[2]; ++iz) {
                std::array<int, 3> idx{ix, iy, iz};
                auto at = [&](int k) {
                    std::array<int, 3> j = idx;
                    j[axis] = k;
                    return g.values[g.index(j[0], j[1], j[2])];
                };
                const int i = idx[axis];
                double v;
                if (n == 2) {
                    v = (at(1) - at(0)) / h;
                } else if (i == 0) {
                    v = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
                } else if (i == n - 1) {
                    v = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
                } else {
                    v = (at(i + 1) - at(i - 1)) / (2.0 * h);
                }
                d.values[g.index(ix, iy, iz)] = v;
            }
    return d;
}

}  // namespace

ScalarField::ScalarField() : ScalarField(constant(0.0)) {}
ScalarField::ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ScalarField ScalarField::constant(double value) {
    auto p = std::make_shared<Impl>();
    p->kind = Kind::Constant;
    p->constant = value;
    return ScalarField(std::move(p));
}

ScalarField ScalarField::expression(Expr e) {
    if (e.is_constant()) return constant(e.constant_value());
    auto p = std::make_shared<Impl>();
    p->kind = Kind::Expression;
    p->expr = std::move(e);
    p->compiled = CompiledExpr(p->expr);
    return ScalarField(std::move(p));
}

ScalarField ScalarField::expression(const std::string& text) { return expression(Expr::parse(text)); }

ScalarField ScalarField::grid(GridData data) {
    for (int a = 0; a < 3; ++a) {
        if (data.nodes[a] < 2) throw InvalidDimensions("grid field needs at least 2 nodes per axis");
        if (!(data.lengths[a] > 0.0)) throw InvalidDimensions("grid field lengths must be positive");
    }
    if (data.values.size() != data.size()) throw InvalidDimensions("grid field value count does not match node counts");
    auto p = std::make_shared<Impl>();
    p->kind = Kind::Grid;
    p->grid = std::move(data);
    return ScalarField(std::move(p));
}

ScalarField::Kind ScalarField::kind() const { return impl_->kind; }
double ScalarField::constant_value() const { return impl_->constant; }

std::string ScalarField::describe() const {
    std::ostringstream os;
    switch (impl_->kind) {
        case Kind::Constant: os << std::setprecision(17) << impl_->constant; break;
        case Kind::Expression: os << impl_->expr.str(); break;
        case Kind::Grid:
            os << "grid(" << impl_->grid.nodes[0] << "x" << impl_->grid.nodes[1] << "x" << impl_->grid.nodes[2] << ")";
            break;
    }
    return os.str();
}

double ScalarField::value(const Vec3& x) const {
    switch (impl_->kind) {
        case Kind::Constant: return impl_->constant;
        case Kind::Expression: return impl_->compiled.eval(x);
        case Kind::Grid: return grid_value(impl_->grid, x);
    }
    return 0.0;
}

ScalarField ScalarField::diff(int axis) const {
    switch (impl_->kind) {
        case Kind::Constant: return constant(0.0);
        case Kind::Expression:
            try {
                return expression(impl_->expr.diff(axis));
            } catch (const NonDifferentiableExpression& e) {
                throw NonDifferentiableField(e.what());
            }
        case Kind::Grid: return grid(grid_difference(impl_->grid, axis));
    }
    return constant(0.0);
}

namespace {

void build_derivatives(const ScalarField& f, std::optional<std::array<ScalarField, 3>>& grad,
                       std::optional<std::array<ScalarField, 6>>& hess, std::string& error) {
    try {
        std::array<ScalarField, 3> g{f.diff(0), f.diff(1), f.diff(2)};
        std::array<ScalarField, 6> h;
        for (int k = 0; k < 6; ++k) h[k] = g[kSlotIndex[k][0]].diff(kSlotIndex[k][1]);
        grad = g;
        hess = h;
    } catch (const NonDifferentiableField& e) {
        error = e.what();
    }
}

}  // namespace

Vec3 ScalarField::gradient(const Vec3& x) const {
    if (impl_->kind == Kind::Constant) return {0.0, 0.0, 0.0};
    std::call_once(impl_->once, [&] { build_derivatives(*this, impl_->grad, impl_->hess, impl_->deriv_error); });
    if (!impl_->grad) throw NonDifferentiableField(impl_->deriv_error);
    const auto& g = *impl_->grad;
    return {g[0].value(x), g[1].value(x), g[2].value(x)};
}

Mat3 ScalarField::hessian(const Vec3& x) const {
    if (impl_->kind == Kind::Constant) return Mat3::zero();
    std::call_once(impl_->once, [&] { build_derivatives(*this, impl_->grad, impl_->hess, impl_->deriv_error); });
    if (!impl_->hess) throw NonDifferentiableField(impl_->deriv_error);
    SymTensor3 s;
    for (int k = 0; k < 6; ++k) s.slot(k) = (*impl_->hess)[k].value(x);
    return s.to_mat();
}

// ---------------------------------------------------------------- TensorField

TensorField::TensorField() : TensorField(constant(SymTensor3::identity())) {}
TensorField::TensorField(std::array<ScalarField, 6> components) : c_(std::move(components)) {}

TensorField TensorField::constant(const SymTensor3& value) {
    std::array<ScalarField, 6> c;
    for (int k = 0; k < 6; ++k) c[k] = ScalarField::constant(value.slot(k));
    return TensorField(c);
}

TensorField TensorField::expression(const std::array<std::string, 6>& texts) {
    std::array<ScalarField, 6> c;
    for (int k = 0; k < 6; ++k) c[k] = ScalarField::expression(texts[k]);
    return TensorField(c);
}

bool TensorField::is_constant() const {
    return std::all_of(c_.begin(), c_.end(), [](const ScalarField& f) { return f.is_constant(); });
}

std::string TensorField::describe() const {
    std::ostringstream os;
    os << '[';
    for (int k = 0; k < 6; ++k) os << (k ? "; " : "") << c_[k].describe();
    os << ']';
    return os.str();
}

SymTensor3 TensorField::value(const Vec3& x) const {
    SymTensor3 r;
    for (int k = 0; k < 6; ++k) r.slot(k) = c_[k].value(x);
    return r;
}

SymTensor3 TensorField::derivative(const Vec3& x, int axis) const {
    SymTensor3 r;
    for (int k = 0; k < 6; ++k) r.slot(k) = c_[k].gradient(x)[axis];
    return r;
}

SymTensor3 TensorField::second_derivative(const Vec3& x, int i, int j) const {
    SymTensor3 r;
    for (int k = 0; k < 6; ++k) r.slot(k) = c_[k].hessian(x)(i, j);
    return r;
}

TensorField TensorField::diff(int axis) const {
    std::array<ScalarField, 6> c;
    for (int k = 0; k < 6; ++k) c[k] = c_[k].diff(axis);
    return TensorField(c);
}

VectorFn make_vector_fn(std::array<ScalarField, 3> components) {
    return [c = std::move(components)](const Vec3& x) -> Vec3 {
        return {c[0].value(x), c[1].value(x), c[2].value(x)};
    };
}

MuFields MuFields::constant(double m1, double m2, double m3) {
    return {ScalarField::constant(m1), ScalarField::constant(m2), ScalarField::constant(m3)};
}

SampleSet SampleSet::cell_centers(const std::array<int, 3>& cells, const Vec3& lengths) {
    SampleSet s;
    const double w = lengths[0] * lengths[1] * lengths[2] / (static_cast<double>(cells[0]) * cells[1] * cells[2]);
    for (int i = 0; i < cells[0]; ++i)
        for (int j = 0; j < cells[1]; ++j)
            for (int k = 0; k < cells[2]; ++k) {
                s.points.push_back({(i + 0.5) * lengths[0] / cells[0], (j + 0.5) * lengths[1] / cells[1],
                                    (k + 0.5) * lengths[2] / cells[2]});
                s.weights.push_back(w);
            }
    return s;
}

// ---------------------------------------------------------------- grid files

GridFile read_grid_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file: " + path.string());
    GridFile f;
    if (!(in >> f.nodes[0] >> f.nodes[1] >> f.nodes[2] >> f.lengths[0] >> f.lengths[1] >> f.lengths[2]))
        throw ConfigError("malformed grid header in " + path.string());
    for (int a = 0; a < 3; ++a) {
        if (f.nodes[a] < 2) throw InvalidDimensions("grid file needs at least 2 nodes per axis: " + path.string());
        if (!(f.lengths[a] > 0.0)) throw InvalidDimensions("grid file lengths must be positive: " + path.string());
    }
    double v;
    while (in >> v) f.values.push_back(v);
    if (!in.eof()) throw ConfigError("non-numeric data in grid file " + path.string());
    const std::size_t n = static_cast<std::size_t>(f.nodes[0]) * f.nodes[1] * f.nodes[2];
    if (f.values.size() == n) f.components = 1;
    else if (f.values.size() == 6 * n) f.components = 6;
    else {
        std::ostringstream os;
        os << "grid file " << path.string() << " has " << f.values.size() << " values; expected " << n << " or "
           << 6 * n;
        throw ConfigError(os.str());
    }
    return f;
}

void write_grid_file(const std::filesystem::path& path, const GridFile& file) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write grid file: " + path.string());
    out << std::setprecision(17);
    out << file.nodes[0] << ' ' << file.nodes[1] << ' ' << file.nodes[2] << ' ' << file.lengths[0] << ' '
        << file.lengths[1] << ' ' << file.lengths[2] << '\n';
    const int c = file.components;
    for (std::size_t i = 0; i < file.values.size(); ++i) out << file.values[i] << ((i + 1) % c == 0 ? '\n' : ' ');
}

GridFile sample_tensor_grid(const TensorField& field, const std::array<int, 3>& nodes, const Vec3& lengths) {
    GridFile f;
    f.nodes = nodes;
    f.lengths = lengths;
    f.components = 6;
    GridData g;
    g.nodes = nodes;
    g.lengths = lengths;
    for (int ix = 0; ix < nodes[0]; ++ix)
        for (int iy = 0; iy < nodes[1]; ++iy)
            for (int iz = 0; iz < nodes[2]; ++iz) {
                const SymTensor3 b = field.value(g.position(ix, iy, iz));
                for (int k = 0; k < 6; ++k) f.values.push_back(b.slot(k));
            }
    return f;
}

ScalarField scalar_field_from_grid_file(const GridFile& file) {
    if (file.components != 1) throw ConfigError("expected a scalar grid file (1 value per node)");
    GridData g;
    g.nodes = file.nodes;
    g.lengths = file.lengths;
    g.values = file.values;
    return ScalarField::grid(std::move(g));
}

TensorField tensor_field_from_grid_file(const GridFile& file) {
    if (file.components != 6) throw ConfigError("expected a tensor grid file (6 values per node)");
    std::array<ScalarField, 6> c;
    const std::size_t n = file.values.size() / 6;
    for (int k = 0; k < 6; ++k) {
        GridData g;
        g.nodes = file.nodes;
        g.lengths = file.lengths;
        g.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) g.values[i] = file.values[6 * i + k];
        c[k] = ScalarField::grid(std::move(g));
    }
    return TensorField(c);
}

}  // namespace vestokes
