"""Splitting a product input state into a mixture of maximally mixed states."""

from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Sequence

import numpy as np

from qsr.config import CapExceeded, get_caps
from qsr.qcore.linalg import Subspace, herm_eig

WEIGHT_CUTOFF = 1e-15


@dataclasses.dataclass(frozen=True)
class MixtureTerm:
    weight: float
    subspace: Subspace
    joint_type: tuple[tuple[int, ...], ...]  # counts[x][y]


def mixture_decomposition(cq_map: Sequence[np.ndarray], word: Sequence[int]) -> list[MixtureTerm]:
    """V^{⊗l}(x^l) = Σ_λ q(λ) π^λ over joint types λ of (x^l, y^l).

    y^l runs over eigen-index words of the letters' states. Eigenvalue
    products are constant on each joint type class, so every class carries
    a maximally mixed state on the span of its eigen-words. Terms of zero
    weight are dropped. Terms are ordered by joint type.
    """
    word = tuple(int(x) for x in word)
    spectra = [herm_eig(np.asarray(v, dtype=complex)) for v in cq_map]
    dims = {s[0].size for s in spectra}
    if len(dims) != 1:
        raise ValueError("letter states must share one dimension")
    d = dims.pop()
    l = len(word)
    if d**l > get_caps().tensor_dim:
        raise CapExceeded(f"dimension {d}^{l} exceeds the tensor cap")
    n_letters = len(cq_map)
    classes: dict[tuple, list[tuple[int, ...]]] = {}
    for ys in itertools.product(range(d), repeat=l):
        counts = np.zeros((n_letters, d), dtype=int)
        for x, y in zip(word, ys):
            counts[x, y] += 1
        key = tuple(map(tuple, counts))
        classes.setdefault(key, []).append(ys)
    terms = []
    for key in sorted(classes):
        ys_list = classes[key]
        ys0 = ys_list[0]
        q = float(np.prod([max(spectra[x][0][y], 0.0) for x, y in zip(word, ys0)]))
        weight = q * len(ys_list)
        if weight <= WEIGHT_CUTOFF:
            continue
        cols = []
        for ys in ys_list:
            vec = np.ones(1, dtype=complex)
            for x, y in zip(word, ys):
                vec = np.kron(vec, spectra[x][1][:, y])
            cols.append(vec)
        terms.append(MixtureTerm(weight, Subspace(d**l, np.stack(cols, axis=1)), key))
    total = sum(t.weight for t in terms)
    return [dataclasses.replace(t, weight=t.weight / total) for t in terms]


def reconstruct(terms: Sequence[MixtureTerm]) -> np.ndarray:
    return sum(t.weight * t.subspace.maximally_mixed() for t in terms)
