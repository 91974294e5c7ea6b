"""The two 3x3 reference slices: a hexagon and a quadrilateral.

Both use the spectrum (4, 2, 1). The hexagon eigenvector matrix is
spectrally complete; the quadrilateral one has a vanishing leading
2x2 minor on rows {1, 2}.
"""

import numpy as np

from .linalg import SpectralPair

LAMBDA = np.array([4.0, 2.0, 1.0])

_r2, _r3, _r6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)

HEXAGON_Q = np.array(
    [
        [_r6 / 6, -_r2 / 2, _r3 / 3],
        [_r6 / 3, 0.0, -_r3 / 3],
        [_r6 / 6, _r2 / 2, _r3 / 3],
    ]
)

QUADRILATERAL_Q = np.array(
    [
        [_r3 / 3, _r6 / 6, -_r2 / 2],
        [_r3 / 3, _r6 / 6, _r2 / 2],
        [_r3 / 3, -_r6 / 3, 0.0],
    ]
)

EXAMPLES = {
    "hexagon": HEXAGON_Q,
    "quadrilateral": QUADRILATERAL_Q,
}


def example_pair(name: str) -> SpectralPair:
    try:
        q = EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None
    return SpectralPair(LAMBDA.copy(), q.copy())
