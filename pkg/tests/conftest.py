import numpy as np

from hpdicke.errors import InstabilityError
from hpdicke.gaussian import QuadraticForm, symplectic_diagonalize


def random_stable_form(rng: np.random.Generator, n_modes: int,
                       dscale: float = 0.1) -> QuadraticForm:
    """Random weakly coupled stable quadratic form; rejection-samples the
    rare unstable draws."""
    while True:
        a = np.diag(rng.uniform(0.9, 1.8, n_modes)).astype(complex)
        for i in range(n_modes):
            for j in range(i + 1, n_modes):
                c = rng.normal(scale=0.08) + 1j * rng.normal(scale=0.08)
                a[i, j] = c
                a[j, i] = np.conj(c)
        b = rng.normal(scale=0.06, size=(n_modes, n_modes)) \
            + 1j * rng.normal(scale=0.06, size=(n_modes, n_modes))
        b = 0.5 * (b + b.T)
        d = dscale * (rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes))
        form = QuadraticForm(A=a, B=b, d=d, e0=float(rng.normal()))
        try:
            symplectic_diagonalize(form)
        except InstabilityError:
            continue
        return form
