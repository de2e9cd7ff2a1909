#pragma once

#include "folitor/field.hpp"
#include "folitor/foliation.hpp"

namespace folitor {

struct KernelOracleResult {
    FourierField field;      // near-kernel vector, normalized
    double sigma1 = 0.0;     // smallest singular value of the truncated operator
    double sigma2 = 0.0;     // second smallest (deflated-iteration estimate)
    bool ambiguous = false;  // gap too small to certify a one-dimensional kernel
    bool average_normalized = false;
};

// Independent route to the closed-form factor: assembles the dense truncated
// operator A = D_zbar - D_z o (mu .) on max|N_i| <= cutoff and extracts its
// smallest singular pair by LU-based inverse iteration (adjoint solve pairs),
// plus a deflated estimate of the second singular value.  Shares no code with
// the resolvent/ODE path beyond the eigenvalue formulas.
KernelOracleResult kernel_oracle(const FoliationParams& params, const FourierField& mu,
                                 int cutoff);

}  // namespace folitor
