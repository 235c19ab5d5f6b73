"""Independent brute-force references used by the test suite.

Nothing here shares code with the modules it checks: encoding goes through
an explicit Kronecker-power matrix, maximum-likelihood decoding enumerates
every message, and the erasure recursion works on interleaved halves
rather than the in-place butterfly.  Enumeration sizes are deliberately
capped so the oracles stay fast.
"""

from __future__ import annotations

import numpy as np

from .construction import CodeSpec

ML_MAX_K = 16
DENSE_MAX_N = 1024


def kronecker_generator(N: int) -> np.ndarray:
    """The n-fold Kronecker power of [[1,0],[1,1]] as a dense 0/1 matrix."""
    if N > DENSE_MAX_N:
        raise ValueError(f"dense generator capped at N = {DENSE_MAX_N}")
    gen = np.array([[1]], dtype=np.uint8)
    while gen.shape[0] < N:
        gen = np.kron(np.array([[1, 0], [1, 1]], dtype=np.uint8), gen)
    return gen


def dense_encode(spec: CodeSpec, msg) -> np.ndarray:
    """Encode by explicit GF(2) matrix multiplication."""
    msg = np.asarray(msg, dtype=np.uint8)
    u = np.zeros(msg.shape[:-1] + (spec.mother_len,), dtype=np.uint8)
    u[..., spec.info_positions] = msg
    gen = kronecker_generator(spec.mother_len)
    return (u @ gen) % 2


def _all_messages(K: int) -> np.ndarray:
    grid = np.indices((2,) * K).reshape(K, -1).T
    return grid.astype(np.uint8)


def ml_decode(spec: CodeSpec, frame) -> np.ndarray:
    """Exhaustive maximum-likelihood decoding of one LLR frame.

    Scores every one of the 2^K codewords by its exact log-likelihood
    under the BPSK/AWGN model, which is the correlation of (1 - 2x) with
    the LLRs.  Saturated (infinite) LLR positions carry no discriminating
    information because every valid codeword is zero there, so they are
    excluded from the correlation.
    """
    if spec.payload_len > ML_MAX_K:
        raise ValueError(f"exhaustive decoding capped at K = {ML_MAX_K}")
    llr = np.asarray(frame, dtype=np.float64)
    if llr.shape != (spec.mother_len,):
        raise ValueError(f"frame length must be N = {spec.mother_len}")
    msgs = _all_messages(spec.payload_len)
    codewords = dense_encode(spec, msgs)
    usable = np.isfinite(llr)
    scores = (1.0 - 2.0 * codewords[:, usable]) @ llr[usable]
    return msgs[int(np.argmax(scores))]


def ml_codeword_scores(spec: CodeSpec, frame):
    """All candidate codewords with their exact log-likelihood scores."""
    if spec.payload_len > ML_MAX_K:
        raise ValueError(f"exhaustive decoding capped at K = {ML_MAX_K}")
    llr = np.asarray(frame, dtype=np.float64)
    msgs = _all_messages(spec.payload_len)
    codewords = dense_encode(spec, msgs)
    usable = np.isfinite(llr)
    scores = (1.0 - 2.0 * codewords[:, usable]) @ llr[usable]
    return msgs, codewords, scores


def exact_bec_channels(erasures) -> np.ndarray:
    """Erasure probability of every synthetic channel, by direct recursion.

    Adjacent positions polarize first (worse channel on the even index),
    after which the even and odd sub-lattices evolve independently.
    """
    eps = np.asarray(erasures, dtype=np.float64)
    if eps.size > DENSE_MAX_N:
        raise ValueError(f"recursion capped at N = {DENSE_MAX_N}")
    if eps.size == 1:
        return eps.copy()
    even = eps[0::2]
    odd = eps[1::2]
    worse = even + odd - even * odd
    better = even * odd
    out = np.empty_like(eps)
    out[0::2] = exact_bec_channels(worse)
    out[1::2] = exact_bec_channels(better)
    return out
