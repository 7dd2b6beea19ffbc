from __future__ import annotations

import numpy as np

from qsr.qcore.channels import Channel, SubChannel
from qsr.qcore.linalg import herm_eig, psd_inv_sqrt, psd_sqrt

SUPPORT_CUTOFF = 1e-12


def bk_recovery(rho: np.ndarray, ch: SubChannel) -> Channel:
    """Transpose-channel recovery for the pair (ρ, N).

    Kraus operators ρ^{1/2} A_k† N(ρ)^{-1/2}, with the inverse taken on the
    support of N(ρ). The support complement is sent to a fixed basis state so
    that the result is trace preserving.
    """
    out = ch(rho)
    if np.trace(out).real <= SUPPORT_CUTOFF:
        raise ValueError("channel output has zero trace; recovery undefined")
    root = psd_sqrt(rho)
    inv = psd_inv_sqrt(out, SUPPORT_CUTOFF)
    kraus = np.einsum("ai,kli,lm->kam", root, ch.kraus.conj(), inv)
    evals, evecs = herm_eig(out)
    complement = evecs[:, evals <= SUPPORT_CUTOFF]
    if complement.shape[1]:
        anchor = np.zeros(ch.dim_in, dtype=complex)
        anchor[0] = 1.0
        extra = np.einsum("i,jc->cij", anchor, complement.conj())
        kraus = np.concatenate([kraus, extra])
    rec = SubChannel(kraus, check=False).without_zero_kraus()
    return Channel(rec.kraus, tol=1e-7)
