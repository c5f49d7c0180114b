"""Dense enumeration helpers over GF(p) for the brute-force oracle suites.

Vectors are numpy int16 rows reduced mod p; arithmetic mod a prime on
small integers is exact, so nothing here leaves exact arithmetic.  All
outputs are sorted, making every enumeration deterministic.
"""

from __future__ import annotations

import numpy as np

from .errors import EnumerationTooLarge

_CHUNK_ROWS = 1 << 20


def all_vectors(p: int, dim: int) -> np.ndarray:
    """All p^dim coordinate rows in lexicographic order, least digit last."""
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int16)
    grids = np.indices((p,) * dim).reshape(dim, -1).T
    return grids.astype(np.int16)


def pack_rows(rows: np.ndarray, p: int) -> np.ndarray:
    """Base-p integer keys; canonical (sorted) unique representation."""
    if rows.shape[1] == 0:
        return np.zeros(len(rows), dtype=np.int64)
    weights = (p ** np.arange(rows.shape[1] - 1, -1, -1)).astype(np.int64)
    return rows.astype(np.int64) @ weights


def unique_rows(rows: np.ndarray, p: int) -> np.ndarray:
    keys = pack_rows(rows, p)
    _, index = np.unique(keys, return_index=True)
    return rows[np.sort(index)]


def sumset(a: np.ndarray, b: np.ndarray, p: int, cap: int = 40_000_000) -> np.ndarray:
    """Unique rows of {x + y mod p : x in a, y in b}, chunked."""
    if len(a) * len(b) > cap:
        raise EnumerationTooLarge(
            f"sumset of {len(a)} x {len(b)} rows exceeds the enumeration cap"
        )
    if len(a) == 0 or len(b) == 0:
        return a[:0]
    pieces = []
    step = max(1, _CHUNK_ROWS // max(1, len(b)))
    for start in range(0, len(a), step):
        block = (a[start : start + step, None, :] + b[None, :, :]) % p
        pieces.append(block.reshape(-1, a.shape[1]))
        if sum(len(x) for x in pieces) > _CHUNK_ROWS * 4:
            pieces = [unique_rows(np.concatenate(pieces), p)]
    return unique_rows(np.concatenate(pieces), p)


def same_row_set(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    ka = np.unique(pack_rows(a, p))
    kb = np.unique(pack_rows(b, p))
    return len(ka) == len(kb) and bool(np.all(ka == kb))


def span_rows(gens: np.ndarray, p: int) -> np.ndarray:
    """All GF(p)-combinations of the generator rows (the subgroup they span)."""
    acc = np.zeros((1, gens.shape[1]), dtype=np.int16)
    for g in gens:
        multiples = np.stack([(k * g.astype(np.int64)) % p for k in range(p)]).astype(
            np.int16
        )
        acc = sumset(acc, multiples, p)
    return acc
