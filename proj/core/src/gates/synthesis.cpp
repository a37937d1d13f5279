#include "qrl/gates/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "qrl/error.hpp"
#include "qrl/gates/zyz.hpp"

namespace qrl::gates {

namespace {

using Slots = std::vector<std::size_t>;

bool is_identity(const Matrix &m) {
    return frobenius_distance(m, Matrix::identity(m.dim())) <= 1e-14;
}

class Builder {
  public:
    explicit Builder(std::size_t width) { seq_.width = width; }

    GateSequence take() { return std::move(seq_); }

    void single(const Matrix &m, std::size_t slot, const std::string &name) {
        if (!is_identity(m)) {
            seq_.steps.push_back({Gate(name, m), {slot}});
        }
    }

    void cnot(std::size_t control, std::size_t target) {
        seq_.steps.push_back({cnot_, {control, target}});
    }

    // Exact Toffoli from six CNOTs, Hadamards and T / T^dagger.
    void toffoli(std::size_t a, std::size_t b, std::size_t t) {
        single(h_, t, "H");
        cnot(b, t);
        single(tdg_, t, "T^dag");
        cnot(a, t);
        single(t_, t, "T");
        cnot(b, t);
        single(tdg_, t, "T^dag");
        cnot(a, t);
        single(t_, b, "T");
        single(t_, t, "T");
        single(h_, t, "H");
        cnot(a, b);
        single(t_, a, "T");
        single(tdg_, b, "T^dag");
        cnot(a, b);
    }

    // Multi-controlled NOT. `dirty` lists qubits that may be borrowed in an
    // arbitrary state and are restored afterwards.
    void mcx(const Slots &controls, std::size_t target, const Slots &dirty) {
        const std::size_t m = controls.size();
        if (m == 0) {
            single(x_, target, "X");
        } else if (m == 1) {
            cnot(controls[0], target);
        } else if (m == 2) {
            toffoli(controls[0], controls[1], target);
        } else if (dirty.size() >= m - 2) {
            mcx_chain(controls, target, dirty);
        } else if (!dirty.empty()) {
            mcx_split(controls, target, dirty.front());
        } else {
            throw Error(ErrorKind::Internal, "multi-controlled NOT needs a spare qubit");
        }
    }

    // Ladder of 4(m-2) Toffolis over m-2 borrowed qubits.
    void mcx_chain(const Slots &x, std::size_t y, const Slots &a) {
        const std::size_t k = x.size();
        auto out = [&](std::size_t i) { return i == k - 1 ? y : a[i - 1]; };
        for (int pass = 0; pass < 2; ++pass) {
            const std::size_t top = pass == 0 ? k - 1 : k - 2;
            for (std::size_t i = top; i >= 2; --i) {
                toffoli(x[i], a[i - 2], out(i));
            }
            toffoli(x[0], x[1], a[0]);
            for (std::size_t i = 2; i <= top; ++i) {
                toffoli(x[i], a[i - 2], out(i));
            }
        }
    }

    // Splits the controls in two halves that borrow each other as scratch,
    // using one extra borrowed qubit to carry the first half's conjunction.
    void mcx_split(const Slots &controls, std::size_t target, std::size_t spare) {
        const std::size_t m1 = (controls.size() + 1) / 2;
        const Slots first(controls.begin(), controls.begin() + static_cast<long>(m1));
        Slots second(controls.begin() + static_cast<long>(m1), controls.end());
        Slots first_pool = second;
        first_pool.push_back(target);
        Slots second_controls = second;
        second_controls.push_back(spare);
        for (int rep = 0; rep < 2; ++rep) {
            mcx(first, spare, first_pool);
            mcx(second_controls, target, first);
        }
    }

    // Controlled-U from the ZYZ angles: U = e^{i delta} A X B X C with ABC = I.
    void controlled_unitary(const Matrix &u, std::size_t control, std::size_t target) {
        const EulerAngles e = zyz_decompose(u);
        single(rot_z((e.beta - e.alpha) / 2), target, "RotZ");
        cnot(control, target);
        single(rot_y(-e.theta / 2) * rot_z(-(e.alpha + e.beta) / 2), target, "B");
        cnot(control, target);
        single(rot_z(e.alpha) * rot_y(e.theta / 2), target, "A");
        single(phase_shift(e.delta), control, "Phase");
    }

    // Lambda_n(U) = Lambda_1(V)[c_n] . Lambda_{n-1}(X)[c_n] . Lambda_1(V^dag)[c_n]
    //             . Lambda_{n-1}(X)[c_n] . Lambda_{n-1}(V), with V^2 = U.
    void mcu(const Gate &u, const Slots &controls, std::size_t target) {
        const std::size_t n = controls.size();
        if (n == 0) {
            single(u.matrix(), target, u.name());
            return;
        }
        if (n == 1) {
            controlled_unitary(u.matrix(), controls[0], target);
            return;
        }
        const Gate v = square_root(u);
        const std::size_t last = controls.back();
        const Slots rest(controls.begin(), controls.end() - 1);
        controlled_unitary(v.matrix(), last, target);
        mcx(rest, last, {target});
        controlled_unitary(v.matrix().adjoint(), last, target);
        mcx(rest, last, {target});
        mcu(v, rest, target);
    }

  private:
    GateSequence seq_;
    Gate cnot_ = builtin("CNOT");
    Matrix h_ = builtin("H").matrix();
    Matrix x_ = builtin("X").matrix();
    Matrix t_ = builtin("T").matrix();
    Matrix tdg_ = builtin("T").matrix().adjoint();
};

// Applies `gate` on `slots` to every column of `m` (dimension 2^width).
// `msb_first` selects whether slot 0 is the most or least significant bit.
void apply_step(Matrix &m, std::size_t width, const GateStep &step, bool msb_first) {
    const std::size_t dim = m.dim();
    const std::size_t k = step.slots.size();
    const std::size_t sub = std::size_t{1} << k;
    std::vector<std::size_t> masks(k);
    std::size_t all = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t slot = step.slots[j];
        const std::size_t bit = msb_first ? width - 1 - slot : slot;
        masks[j] = std::size_t{1} << bit;
        all |= masks[j];
    }
    const Matrix &g = step.gate.matrix();
    std::vector<Complex> in(sub);
    std::vector<std::size_t> idx(sub);
    for (std::size_t col = 0; col < dim; ++col) {
        for (std::size_t base = 0; base < dim; ++base) {
            if ((base & all) != 0) {
                continue;
            }
            for (std::size_t s = 0; s < sub; ++s) {
                std::size_t i = base;
                for (std::size_t j = 0; j < k; ++j) {
                    if ((s >> (k - 1 - j)) & 1U) {
                        i |= masks[j];
                    }
                }
                idx[s] = i;
                in[s] = m(i, col);
            }
            for (std::size_t r = 0; r < sub; ++r) {
                Complex acc = 0.0;
                for (std::size_t c = 0; c < sub; ++c) {
                    acc += g(r, c) * in[c];
                }
                m(idx[r], col) = acc;
            }
        }
    }
}

Matrix compose_impl(const GateSequence &seq, bool msb_first) {
    Matrix m = Matrix::identity(std::size_t{1} << seq.width);
    for (const auto &step : seq.steps) {
        for (std::size_t slot : step.slots) {
            if (slot >= seq.width) {
                throw Error(ErrorKind::InvalidArgument, "gate step slot out of range");
            }
        }
        apply_step(m, seq.width, step, msb_first);
    }
    return m;
}

} // namespace

Matrix GateSequence::compose() const { return compose_impl(*this, true); }

Matrix compose_little_endian(const GateSequence &seq) { return compose_impl(seq, false); }

std::size_t GateSequence::cnot_count() const {
    std::size_t n = 0;
    for (const auto &step : steps) {
        n += step.gate.arity() == 2 ? 1 : 0;
    }
    return n;
}

GateSequence synthesize_multi_controlled(const Gate &g, std::size_t n_controls) {
    if (g.arity() != 1) {
        throw Error(ErrorKind::ArityMismatch, "synthesis needs a single-qubit gate");
    }
    Builder b(n_controls + 1);
    Slots controls(n_controls);
    for (std::size_t i = 0; i < n_controls; ++i) {
        controls[i] = i;
    }
    b.mcu(g, controls, n_controls);
    return b.take();
}

GateSequence qft_sequence(std::size_t n) {
    GateSequence seq;
    seq.width = n;
    const Gate h = builtin("H");
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = n - 1; j > i; --j) {
            const double angle = std::numbers::pi / static_cast<double>(std::size_t{1} << (j - i));
            const double params[] = {angle};
            seq.steps.push_back({builtin("CPhase", params), {j, i}});
        }
        seq.steps.push_back({h, {i}});
    }
    const Gate swap = builtin("SWAP");
    for (std::size_t j = 0; j < n / 2; ++j) {
        seq.steps.push_back({swap, {j, n - 1 - j}});
    }
    return seq;
}

} // namespace qrl::gates
