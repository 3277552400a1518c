"""Frozen convention choices, collected in one place and hashable.

Every residual this package reports depends on a handful of sign and
normalisation choices that are easy to silently flip while refactoring.
They are recorded here as data; reports embed ``conventions_hash()`` so a
regression caused by a convention edit is attributable from the report
alone.
"""

from __future__ import annotations

import hashlib
import json

# Ordered product of root factors in the unipotent part of the R-matrix:
# the factor of the *last* root in the normal ordering stands leftmost.
RHAT_REVERSED_PRODUCT = True

# The exponential base attached to a root factor.  "norm" means
# qbar_alpha = q^(-(alpha|alpha)) (times -1 for an odd root); "half" is the
# experimental alternative qbar_alpha = q^(-(alpha|alpha)^2/2).
QBAR_DEFAULT = "norm"

# Reparametrisation between the dynamical parameter mu and the closed-form
# variable: x^2 = q^(CLOSED_FORM_S * (mu|alpha) + CLOSED_FORM_T).  Fitted
# once on the two-dimensional module pair and reused everywhere.
CLOSED_FORM_S = -1
CLOSED_FORM_T = 0

CONVENTIONS: dict[str, object] = {
    "matrix_q_integers": "symmetric (q^n - q^-n)/(q - q^-1)",
    "exponential_q_integers": "(1 - q^n)/(1 - q)",
    "coproduct": "e -> e x q^t + 1 x e ; f -> f x 1 + q^-t x f",
    "tensor_sign_rule": "(a x b)(v x w) = (-1)^(deg b * deg v) av x bw",
    "composite_e": "e_a e_b - q^(-(a|b)) e_b e_a for a before b",
    "composite_f": "f_b f_a - q^((a|b)) f_a f_b for a before b",
    "k_eigenvalue": "q^((lambda_1|lambda_2))",
    "b_eigenvalue": "q^((eta|eta) - (mu|eta))",
    "mu_shift": "slot shift with multiplier c sends mu to mu - c*eta",
    "qbar": QBAR_DEFAULT,
    "rhat_reversed_product": RHAT_REVERSED_PRODUCT,
    "doubled_odd_roots": "no separate factor in the unipotent product",
    "closed_form_fit": [CLOSED_FORM_S, CLOSED_FORM_T],
    "residual_norm": "max-abs difference / max(1, max-abs lhs, max-abs rhs)",
}


def conventions_hash() -> str:
    """Stable hash of the convention table (first 16 hex digits)."""
    blob = json.dumps(CONVENTIONS, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
