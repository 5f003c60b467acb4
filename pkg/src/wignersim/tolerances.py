"""Numerical tolerances shared across the package.

Every quantity the bundled presets produce is algebraic over sqrt(2) and
sqrt(3); 1e-9 cleanly separates 0, 1/12, 1/9 and 1/3 in double precision.
"""

EPS_ALG = 1e-9    # operator identities (unitarity, projector algebra, commutators)
EPS_NORM = 1e-9   # state normalisation
EPS_PROB = 1e-9   # probability table comparisons
EPS_CERT = 1e-9   # certainty / nullity cut: P >= 1-EPS_CERT counts as 1, P <= EPS_CERT as 0


def set_all(eps: float) -> None:
    """Set every tolerance at once (used by the CLI --tolerance flag).

    Consumers read these module attributes at call time, so the change
    takes effect immediately.
    """
    if not 0 < eps < 1:
        raise ValueError("tolerance must lie strictly between 0 and 1")
    global EPS_ALG, EPS_NORM, EPS_PROB, EPS_CERT
    EPS_ALG = EPS_NORM = EPS_PROB = EPS_CERT = eps
