from functools import lru_cache

import numpy as np

from lrdkit.generators import GeneratorSpec, generate, generate_values

T14 = 2**14


@lru_cache(maxsize=None)
def fgn_values(hurst: float, seed: int, n: int = T14) -> np.ndarray:
    v = generate_values(GeneratorSpec("fgn", n, seed=seed, hurst=hurst))
    v.setflags(write=False)
    return v


def fgn_series(hurst: float, seed: int, n: int = T14):
    return generate(GeneratorSpec("fgn", n, seed=seed, hurst=hurst))

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool | None, detail: str) -> None:
    status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    line = f"criterion {criterion}: {status} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
