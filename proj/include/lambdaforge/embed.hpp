#pragma once

#include <stdexcept>
#include <string>

#include "engine.hpp"
#include "tensor.hpp"

// Embedding of constant differential forms on flat R^7 into the free-field
// vertex superalgebra: each coordinate direction carries the odd frame fields
// e^i_+ = (b_i + c^i)/sqrt(2) and e^i_- = (b_i - c^i)/sqrt(2), which satisfy
// [e^i_+ la e^j_+] = delta^{ij}, [e^i_- la e^j_-] = -delta^{ij}, and
// [e^i_+ la e^j_-] = 0. A rank-r form w maps to its normally ordered frame
// expansion over strictly increasing index tuples, with an i^r prefactor on
// the minus chirality so that both families of sections close on real
// structure constants.

namespace lf {

// The odd frame field e^i (0-based coordinate index) of the given chirality
// (+1 or -1) inside a free-field algebra with at least kDim quadruples.
inline FieldExpr cdr_frame(const Algebra &host, int i, int chirality) {
    if (i < 0 || i >= kDim)
        throw std::out_of_range("frame index out of range");
    if (host.quadruples < kDim)
        throw std::invalid_argument("host algebra needs at least 7 free-field quadruples");
    const Scalar half_sqrt2 = Scalar::basis(2, Rat(1, 2)); // 1/sqrt(2)
    FieldExpr b = host.gen_expr(host.gen_index("b" + std::to_string(i + 1)));
    FieldExpr c = host.gen_expr(host.gen_index("c" + std::to_string(i + 1)));
    return chirality >= 0 ? half_sqrt2 * (b + c) : half_sqrt2 * (b - c);
}

// The normally ordered embedding of an antisymmetric form:
//   embed(w, s) = i^{rank} (if s = -1) * sum_{a_1 < ... < a_r} w_a
//                 :e^{a_1}_s ( ... e^{a_r}_s ) : (right-nested).
inline FieldExpr embed_form_flat(const Algebra &host, const TensorTable &w, int chirality) {
    if (w.rank() > 4)
        throw std::invalid_argument("embed_form_flat supports forms of rank at most 4");
    Scalar pref(1);
    if (chirality < 0)
        for (int r = 0; r < w.rank(); ++r)
            pref = pref * Scalar::i();
    FieldExpr total;
    for (const auto &[idx, v] : w.entries()) {
        if (idx.empty()) {
            total = total + FieldExpr::constant(pref * Scalar(v));
            continue;
        }
        FieldExpr acc = cdr_frame(host, idx.back(), chirality);
        for (int r = static_cast<int>(idx.size()) - 2; r >= 0; --r)
            acc = nprod(host, cdr_frame(host, idx[r], chirality), acc);
        total.add(acc, pref * Scalar(v));
    }
    return total;
}

} // namespace lf
