import itertools

import numpy as np
import pytest

import conewalks as cw

SMALL_2D = [v for v in itertools.product((-1, 0, 1), repeat=2) if v != (0, 0)]
SMALL_3D = [v for v in itertools.product((-1, 0, 1), repeat=3) if v != (0, 0, 0)]


def _sample_step_sets(rng, vectors, n_wanted, keep, max_draws=100000, allow_partial=False):
    """Deterministically sample distinct step subsets satisfying `keep`."""
    found = []
    seen = set()
    for _ in range(max_draws):
        if len(found) >= n_wanted:
            return found
        k = int(rng.integers(3, min(8, len(vectors)) + 1))
        idx = tuple(sorted(rng.choice(len(vectors), size=k, replace=False).tolist()))
        if idx in seen:
            continue
        seen.add(idx)
        steps = [vectors[i] for i in idx]
        if keep(steps):
            found.append(steps)
    if allow_partial:
        return found
    raise RuntimeError(f"could not sample {n_wanted} step sets (found {len(found)})")


def _is_proper(steps):
    m = cw.from_step_set(steps)
    if not cw.check_h1(m):
        return False
    return cw.check_h2prime(m, cw.orthant(m.dim)).proper


def _is_improper_with_h1(steps):
    m = cw.from_step_set(steps)
    if not cw.check_h1(m):
        return False
    return not cw.check_h2prime(m, cw.orthant(m.dim)).proper


@pytest.fixture(scope="session")
def proper_2d_corpus():
    rng = np.random.default_rng(20240211)
    return _sample_step_sets(rng, SMALL_2D, 50, _is_proper)


@pytest.fixture(scope="session")
def proper_3d_corpus():
    rng = np.random.default_rng(20240212)
    return _sample_step_sets(rng, SMALL_3D, 10, _is_proper)


@pytest.fixture(scope="session")
def improper_2d_corpus():
    # pools confined to {<u, s> <= 0} for a few orthant directions u, so
    # improper sets (support in a dual half-space) show up quickly
    rng = np.random.default_rng(20240213)
    found = []
    seen = set()
    for u in ((1, 1), (1, 0), (0, 1), (2, 1), (1, 2)):
        pool = [v for v in SMALL_2D if u[0] * v[0] + u[1] * v[1] <= 0]
        for steps in _sample_step_sets(rng, pool, 8, _is_improper_with_h1,
                                       max_draws=3000, allow_partial=True):
            key = frozenset(steps)
            if key not in seen:
                seen.add(key)
                found.append(steps)
    assert len(found) >= 20
    return found[:20]


@pytest.fixture()
def step_file(tmp_path):
    import json

    def make(name, dim, steps, weights=None):
        doc = {"dim": dim, "steps": [list(s) for s in steps]}
        if weights is not None:
            doc["weights"] = list(weights)
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return make
