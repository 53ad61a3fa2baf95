"""Random problem generators used by the benchmark command and the test suite."""

from typing import Optional

import numpy as np

from .models import ParametricLP, Sense


def random_instance(m: int, n: Optional[int] = None, seed: int = 0, d_scale: float = 1.0) -> ParametricLP:
    """
    Standard-form instance with entries uniform in (-1, 1) and b = A_B v for
    a positive v, so the first m columns form a feasible basis at lambda = 0.
    Costs are positive, which keeps every P(lambda) bounded.
    """
    n = 2 * m if n is None else n
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1.0, 1.0, (m, n))
    D = d_scale * rng.uniform(-1.0, 1.0, (m, n))
    c = rng.uniform(0.0, 1.0, n)
    b = A[:, :m] @ rng.uniform(0.5, 1.5, m)
    return ParametricLP(c=c, A=A, D=D, b=b, senses=(Sense.EQ.value,) * m, standard_form=True)


def defective_instance(m: int, seed: int = 0) -> ParametricLP:
    """
    Instance with A_B = I and D_B = S N S^T, N nilpotent with a unit
    superdiagonal and S orthogonal, so E_B = D_B is a single Jordan block
    for the basis formed by the first m columns.
    """
    rng = np.random.default_rng(seed)
    N = np.triu(rng.uniform(-1.0, 1.0, (m, m)), k=2)
    N[np.arange(m - 1), np.arange(1, m)] = 1.0
    S, _ = np.linalg.qr(rng.standard_normal((m, m)))
    D_B = S @ N @ S.T
    A = np.hstack([np.eye(m), rng.uniform(-1.0, 1.0, (m, m))])
    D = np.hstack([D_B, rng.uniform(-1.0, 1.0, (m, m))])
    c = rng.uniform(0.0, 1.0, 2 * m)
    b = rng.uniform(0.5, 1.5, m)
    return ParametricLP(c=c, A=A, D=D, b=b, senses=(Sense.EQ.value,) * m, standard_form=True)
