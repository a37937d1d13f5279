#include "qrl/gates/gate.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::gates {

namespace {

constexpr std::array<std::string_view, 16> kCanonicalNames = {
    "I",    "H",       "X",     "Y",    "Z",    "S",    "T",      "SqrtNot",
    "CNOT", "SWAP",    "Phase", "RotX", "RotY", "RotZ", "CPhase", "Toffoli"};

struct Alias {
    std::string_view spelling;
    std::string_view canonical;
};

// Lower-case spellings used by the different surface dialects.
constexpr std::array<Alias, 26> kAliases = {{
    {"i", "I"},          {"id", "I"},           {"h", "H"},
    {"x", "X"},          {"not", "X"},          {"sigma_x", "X"},
    {"y", "Y"},          {"sigma_y", "Y"},      {"z", "Z"},
    {"sigma_z", "Z"},    {"s", "S"},            {"t", "T"},
    {"sqrtnot", "SqrtNot"}, {"sqrt_not", "SqrtNot"}, {"cnot", "CNOT"},
    {"swap", "SWAP"},    {"phase", "Phase"},    {"rotx", "RotX"},
    {"roty", "RotY"},    {"rotz", "RotZ"},      {"cphase", "CPhase"},
    {"toffoli", "Toffoli"}, {"ccnot", "Toffoli"}, {"rx", "RotX"},
    {"ry", "RotY"},      {"rz", "RotZ"},
}};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view canonical_name(std::string_view name) {
    const std::string key = lower(name);
    for (const auto &alias : kAliases) {
        if (alias.spelling == key) {
            return alias.canonical;
        }
    }
    return {};
}

const Complex kI{0.0, 1.0};

} // namespace

Gate::Gate(std::string name, Matrix matrix)
    : name_(std::move(name)), matrix_(std::move(matrix)) {
    const std::size_t dim = matrix_.dim();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("gate '{}' has dimension {}, not a power of two",
                                name_, dim));
    }
    arity_ = static_cast<std::size_t>(std::countr_zero(dim));
    if (!matrix_.is_unitary(kTolerance)) {
        throw Error(ErrorKind::NonUnitary,
                    fmt::format("gate '{}' is not unitary", name_));
    }
}

Matrix global_phase(double delta) {
    const Complex e = std::polar(1.0, delta);
    return Matrix(2, {e, 0.0, 0.0, e});
}

Matrix rot_x(double xi) {
    const double c = std::cos(xi / 2);
    const double s = std::sin(xi / 2);
    return Matrix(2, {c, kI * s, kI * s, c});
}

Matrix rot_y(double xi) {
    const double c = std::cos(xi / 2);
    const double s = std::sin(xi / 2);
    return Matrix(2, {c, s, -s, c});
}

Matrix rot_z(double xi) {
    return Matrix(2, {std::polar(1.0, xi / 2), 0.0, 0.0, std::polar(1.0, -xi / 2)});
}

Matrix phase_shift(double phi) {
    return Matrix(2, {1.0, 0.0, 0.0, std::polar(1.0, phi)});
}

std::span<const std::string_view> builtin_names() { return kCanonicalNames; }

bool is_parametric(std::string_view name) {
    const auto canon = canonical_name(name);
    return canon == "Phase" || canon == "CPhase" || canon == "RotX" ||
           canon == "RotY" || canon == "RotZ";
}

Gate builtin(std::string_view name, std::span<const double> params) {
    const auto canon = canonical_name(name);
    if (canon.empty()) {
        throw Error(ErrorKind::UnknownGate, fmt::format("unknown gate '{}'", name));
    }
    const bool parametric = is_parametric(canon);
    if (parametric && params.size() != 1) {
        throw Error(ErrorKind::MissingParameter,
                    fmt::format("gate '{}' takes exactly one angle", canon));
    }
    if (!parametric && !params.empty()) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("gate '{}' takes no parameters", canon));
    }
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const std::string label(canon);
    if (canon == "I") return Gate(label, Matrix::identity(2));
    if (canon == "H") {
        return Gate(label, Matrix(2, {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2}));
    }
    if (canon == "X") return Gate(label, Matrix(2, {0.0, 1.0, 1.0, 0.0}));
    if (canon == "Y") return Gate(label, Matrix(2, {0.0, -kI, kI, 0.0}));
    if (canon == "Z") return Gate(label, Matrix(2, {1.0, 0.0, 0.0, -1.0}));
    if (canon == "S") return Gate(label, Matrix(2, {1.0, 0.0, 0.0, kI}));
    if (canon == "T") {
        return Gate(label, Matrix(2, {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)}));
    }
    if (canon == "SqrtNot") {
        const Complex p{0.5, 0.5};
        const Complex m{0.5, -0.5};
        return Gate(label, Matrix(2, {p, m, m, p}));
    }
    if (canon == "CNOT") {
        return Gate(label, Matrix(4, {1.0, 0.0, 0.0, 0.0, //
                                      0.0, 1.0, 0.0, 0.0, //
                                      0.0, 0.0, 0.0, 1.0, //
                                      0.0, 0.0, 1.0, 0.0}));
    }
    if (canon == "SWAP") {
        return Gate(label, Matrix(4, {1.0, 0.0, 0.0, 0.0, //
                                      0.0, 0.0, 1.0, 0.0, //
                                      0.0, 1.0, 0.0, 0.0, //
                                      0.0, 0.0, 0.0, 1.0}));
    }
    if (canon == "Toffoli") {
        return Gate(label, multi_controlled(builtin("X"), 2).matrix());
    }
    const double angle = params[0];
    if (canon == "Phase") return Gate(label, phase_shift(angle));
    if (canon == "RotX") return Gate(label, rot_x(angle));
    if (canon == "RotY") return Gate(label, rot_y(angle));
    if (canon == "RotZ") return Gate(label, rot_z(angle));
    // CPhase
    const std::array<Complex, 4> diag = {1.0, 1.0, 1.0, std::polar(1.0, angle)};
    return Gate(label, Matrix::diagonal(diag));
}

Gate adjoint(const Gate &g) {
    std::string name = g.name();
    if (name.ends_with("^dag")) {
        name.resize(name.size() - 4);
    } else {
        name += "^dag";
    }
    return Gate(std::move(name), g.matrix().adjoint());
}

Gate controlled(const Gate &g) { return multi_controlled(g, 1); }

Gate multi_controlled(const Gate &g, std::size_t n_controls) {
    if (n_controls == 0) {
        return g;
    }
    const std::size_t inner = g.matrix().dim();
    const std::size_t dim = inner << n_controls;
    Matrix m = Matrix::identity(dim);
    const std::size_t offset = dim - inner;
    for (std::size_t r = 0; r < inner; ++r) {
        for (std::size_t c = 0; c < inner; ++c) {
            m(offset + r, offset + c) = g.matrix()(r, c);
        }
    }
    std::string name = g.name();
    for (std::size_t i = 0; i < n_controls; ++i) {
        name.insert(0, "C");
    }
    return Gate(std::move(name), std::move(m));
}

Gate square_root(const Gate &g) {
    if (g.arity() != 1) {
        throw Error(ErrorKind::ArityMismatch, "square_root needs a single-qubit gate");
    }
    // Cayley-Hamilton: U^2 = tr(U) U - det(U) I, so V = (U + s I) / sqrt(tr U + 2 s)
    // with s^2 = det U squares to U. Pick the sign of s that keeps the
    // denominator away from zero.
    const Matrix &u = g.matrix();
    const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const Complex tr = u.trace();
    Complex s = std::sqrt(det);
    if (std::abs(tr + 2.0 * s) < std::abs(tr - 2.0 * s)) {
        s = -s;
    }
    const Complex tau = std::sqrt(tr + 2.0 * s);
    Matrix v = u + s * Matrix::identity(2);
    v *= 1.0 / tau;
    return Gate("sqrt(" + g.name() + ")", std::move(v));
}

} // namespace qrl::gates
