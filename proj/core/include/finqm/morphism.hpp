#pragma once

// Submodule decomposition V_A(alpha) = sum over beta of V_AB(beta), local embeddings p^beta,
// and the pairing [e|f].

#include <vector>

#include "finqm/repmod.hpp"

namespace finqm {

struct Summand {
    SpecPoint beta;
    ModulePtr sub;                // V_B(beta) with the roots realized by the basis below
    std::vector<StateVec> basis;  // canonical basis of V_AB(beta), in the ambient module
    long r = 0, ell = 0;          // U- and V-branch indices
    long index = 0;               // position in decompose() order
};

/// B = A(k a, l b) with k l | N_A.  Summands ordered by (r, ell).
std::vector<Summand> decompose(const ModulePtr& M, const WeylDesc& B);

struct Embedding {
    WeylDesc sub, amb;
    SpecPoint beta;
    long branch = 0;  // summand index
    long g = 0;       // root choice: columns scaled by zeta_{n_B}^g
    ModulePtr src, dst;
    // column i = image of e_i, stored sparsely
    std::vector<std::vector<std::pair<long, Scalar>>> cols;

    StateVec apply(const StateVec& x) const;
    Matrix matrix() const;
};

/// branch < 0 means "whichever summand carries beta".
Embedding embed_pbeta(const ModulePtr& Msub, const ModulePtr& Mamb, long branch = -1, long g = 0);

struct PairingResult {
    Scalar value;
    bool compatible = false;
};

/// Ambient algebra is join(B, D), taken at the principal roots of the common spectral point.
PairingResult pairing(const StateVec& e, const StateVec& f);
Scalar pairing_row_sum(const std::vector<StateVec>& basis, const StateVec& f);

}  // namespace finqm
