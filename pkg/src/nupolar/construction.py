"""Frozen-set construction for mother, shortened, and extended polar codes.

A code is built by evolving a stage-0 reliability vector (one LLR mean per
codeword position) through the polarization butterfly and unfreezing the K
most reliable source positions.  Uniform vectors give the classic mother
code; zeroing the entries matched to shortened positions and re-evolving
gives the re-polarized (NUPGA) shortened code; adding the reliability of a
repeated observation gives the extended code.  Baseline shortened codes
(CW / RQUP / NAT_PD selection without re-polarization) are also provided.

All indices in the Python API are 0-based.  The JSON serialization of
:class:`CodeSpec` uses 1-based positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .numerics import bec_pair, nupga_pair, phi, phi_inv

CONSTRUCTION_METHODS = ("GA_uniform", "NUPGA_shortened", "NUPGA_extended", "BEC_oracle")
PATTERN_METHODS = ("CW", "RQUP", "NAT_PD")


class ConstructionError(ValueError):
    """A code with the requested parameters cannot be built."""


def _check_power_of_two(n: int) -> int:
    n = int(n)
    if n < 2 or n & (n - 1):
        raise ConstructionError(f"mother length must be a power of two >= 2, got {n}")
    return n


def bit_reverse(indices, n_bits: int):
    """Reverse the lowest ``n_bits`` bits of each index."""
    idx = np.asarray(indices)
    out = np.zeros_like(idx)
    for b in range(n_bits):
        out |= ((idx >> b) & 1) << (n_bits - 1 - b)
    return out


@dataclass
class RateMatchPattern:
    """Codeword positions removed (shorten) or repeated (extend).

    ``indices`` are sorted, distinct, 0-based positions into the length-N
    mother codeword.  ``kind`` is one of ``"none"``, ``"shorten"``,
    ``"extend"``.
    """

    kind: str = "none"
    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        if self.kind not in ("none", "shorten", "extend"):
            raise ConstructionError(f"unknown pattern kind {self.kind!r}")
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        idx = np.sort(idx)
        if idx.size and (np.any(np.diff(idx) == 0) or idx[0] < 0):
            raise ConstructionError("pattern indices must be distinct and non-negative")
        if self.kind == "none" and idx.size:
            raise ConstructionError("a 'none' pattern carries no indices")
        idx.setflags(write=False)
        self.indices = idx

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RateMatchPattern)
            and self.kind == other.kind
            and np.array_equal(self.indices, other.indices)
        )


def normalize_pattern(pattern, N: int, M: int, kind: str = "shorten") -> RateMatchPattern:
    """Coerce a user-supplied pattern into a validated :class:`RateMatchPattern`.

    Accepted forms: a :class:`RateMatchPattern`, a method name from
    ``PATTERN_METHODS``, a length-N binary keep-mask (1 = transmitted,
    0 = removed), or a list of removed 0-based positions.
    """
    expected = abs(N - M)
    if isinstance(pattern, RateMatchPattern):
        out = pattern
    elif isinstance(pattern, str):
        out = shortening_pattern(pattern, N, M)
    else:
        arr = np.asarray(pattern)
        if arr.size == N and np.all((arr == 0) | (arr == 1)):
            out = RateMatchPattern(kind, np.flatnonzero(arr == 0))
        else:
            out = RateMatchPattern(kind, arr)
    if out.kind != kind:
        raise ConstructionError(f"pattern kind {out.kind!r} does not match {kind!r}")
    if len(out) != expected:
        raise ConstructionError(f"pattern has {len(out)} positions, |N - M| = {expected}")
    if out.indices.size and out.indices[-1] >= N:
        raise ConstructionError("pattern positions exceed the mother length")
    return out


@dataclass
class CodeSpec:
    """Complete description of one code instance.

    ``frozen_mask[i]`` is True when source position ``i`` carries a frozen
    zero.  ``tx_len`` is the transmitted length after rate matching.  The
    arrays are marked read-only so a spec can be shared across workers.
    """

    mother_len: int
    payload_len: int
    tx_len: int
    frozen_mask: np.ndarray
    pattern: RateMatchPattern
    design_snr_db: float = 0.0
    construction_method: str = "GA_uniform"
    g_mode: str = "sum"

    def __post_init__(self):
        N = _check_power_of_two(self.mother_len)
        mask = np.array(self.frozen_mask, dtype=bool)
        if mask.shape != (N,):
            raise ConstructionError("frozen mask length must equal the mother length")
        K = int(self.payload_len)
        M = int(self.tx_len)
        if not 0 <= K <= M:
            raise ConstructionError(f"payload length {K} outside [0, {M}]")
        if int(np.count_nonzero(~mask)) != K:
            raise ConstructionError("frozen mask must leave exactly K information positions")
        if self.construction_method not in CONSTRUCTION_METHODS:
            raise ConstructionError(f"unknown construction method {self.construction_method!r}")
        if self.g_mode not in ("sum", "product"):
            raise ConstructionError(f"unknown g_mode {self.g_mode!r}")
        if self.pattern.kind == "shorten":
            if not N // 2 < M < N or M != N - len(self.pattern):
                raise ConstructionError("shortened length must satisfy N/2 < M = N - |pattern| < N")
            if not np.all(mask[self.pattern.indices]):
                raise ConstructionError("every shortened position must map to a frozen input")
        elif self.pattern.kind == "extend":
            if M != N + len(self.pattern):
                raise ConstructionError("extended length must satisfy M = N + |pattern|")
        elif M != N:
            raise ConstructionError("tx length must equal mother length without a pattern")
        mask.setflags(write=False)
        self.mother_len, self.payload_len, self.tx_len = N, K, M
        self.frozen_mask = mask
        self.design_snr_db = float(self.design_snr_db)

    @property
    def info_positions(self) -> np.ndarray:
        return np.flatnonzero(~self.frozen_mask)

    def to_json(self, indent: int | None = None) -> str:
        """Serialize to JSON with 1-based pattern/mask positions."""
        doc = {
            "mother_len": self.mother_len,
            "payload_len": self.payload_len,
            "tx_len": self.tx_len,
            "frozen_mask": self.frozen_mask.astype(int).tolist(),
            "pattern": {
                "kind": self.pattern.kind,
                "indices": (self.pattern.indices + 1).tolist(),
            },
            "design_snr_db": self.design_snr_db,
            "construction_method": self.construction_method,
            "g_mode": self.g_mode,
        }
        return json.dumps(doc, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        doc = json.loads(text)
        pattern = RateMatchPattern(
            doc["pattern"]["kind"], np.asarray(doc["pattern"]["indices"], dtype=np.int64) - 1
        )
        return cls(
            mother_len=doc["mother_len"],
            payload_len=doc["payload_len"],
            tx_len=doc["tx_len"],
            frozen_mask=np.asarray(doc["frozen_mask"], dtype=bool),
            pattern=pattern,
            design_snr_db=doc["design_snr_db"],
            construction_method=doc["construction_method"],
            g_mode=doc["g_mode"],
        )


def _pair_unguarded(a, b, g_mode: str):
    # Literal update with no zero guard (test hook for the monotone-penalty
    # property): phi(0) = 1 drives the check output to 0 and the sum output
    # to the surviving mean.
    pa = np.asarray(phi(a))
    pb = np.asarray(phi(b))
    arg = 1.0 - (1.0 - pa) * (1.0 - pb)
    pos = arg > 0
    minus = np.where(pos, np.asarray(phi_inv(np.where(pos, arg, 1.0))), np.minimum(a, b))
    plus = a + b if g_mode == "sum" else a * b
    return minus, plus


def evolve_reliabilities(stage0, g_mode: str = "sum", zero_guard: bool = True, keep_stages: bool = False):
    """Run the polarization butterfly over a stage-0 reliability vector.

    Stage ``s`` pairs positions that differ in bit ``s`` (distance 2^s,
    smallest first); the check-node output lands on the lower index of each
    pair and the variable-node output on the upper.  With ``zero_guard``
    (the default) a pair containing a dead channel passes through unchanged.
    Returns the fully evolved vector, or the list of all ``log2(N) + 1``
    stage vectors when ``keep_stages`` is set.
    """
    v = np.array(stage0, dtype=np.float64)
    if v.ndim != 1:
        raise ConstructionError("reliability vector must be one-dimensional")
    N = _check_power_of_two(v.size)
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ConstructionError("reliabilities must be finite and non-negative")
    stages = [v.copy()]
    d = 1
    while d < N:
        pairs = v.reshape(-1, 2, d)
        a = pairs[:, 0, :].copy()
        b = pairs[:, 1, :].copy()
        if zero_guard:
            minus, plus = nupga_pair(a, b, g_mode)
        else:
            minus, plus = _pair_unguarded(a, b, g_mode)
        pairs[:, 0, :] = minus
        pairs[:, 1, :] = plus
        stages.append(v.copy())
        d *= 2
    return stages if keep_stages else v


def evolve_bec(stage0, keep_stages: bool = False):
    """Exact BEC erasure evolution through the same butterfly schedule."""
    v = np.array(stage0, dtype=np.float64)
    if v.ndim != 1:
        raise ConstructionError("erasure vector must be one-dimensional")
    N = _check_power_of_two(v.size)
    if np.any(v < 0) or np.any(v > 1):
        raise ConstructionError("erasure probabilities must lie in [0, 1]")
    stages = [v.copy()]
    d = 1
    while d < N:
        pairs = v.reshape(-1, 2, d)
        minus, plus = bec_pair(pairs[:, 0, :].copy(), pairs[:, 1, :].copy())
        pairs[:, 0, :] = minus
        pairs[:, 1, :] = plus
        stages.append(v.copy())
        d *= 2
    return stages if keep_stages else v


def select_information_set(rel, K: int) -> np.ndarray:
    """Frozen mask unfreezing the K most reliable positions.

    Ties break toward the lower index.  Raises :class:`ConstructionError`
    when fewer than K positions have strictly positive reliability.
    """
    rel = np.asarray(rel, dtype=np.float64)
    K = int(K)
    usable = int(np.count_nonzero(rel > 0))
    if K > usable:
        raise ConstructionError(
            f"need {K} information channels but only {usable} are usable (deficit {K - usable})"
        )
    order = np.argsort(-rel, kind="stable")
    mask = np.ones(rel.size, dtype=bool)
    mask[order[:K]] = False
    return mask


def design_snr_to_llr_mean(design_snr_db: float) -> float:
    """Stage-0 LLR mean 4*S for a design point of S = 10^(dB/10)."""
    return 4.0 * 10.0 ** (design_snr_db / 10.0)


def build_mother_code(N: int, K: int, design_snr_db: float = 0.0, g_mode: str = "sum") -> CodeSpec:
    """Length-N power-of-two code with K information bits (uniform GA)."""
    N = _check_power_of_two(N)
    if not 0 < K <= N:
        raise ConstructionError(f"payload length {K} outside (0, {N}]")
    stage0 = np.full(N, design_snr_to_llr_mean(design_snr_db))
    rel = evolve_reliabilities(stage0, g_mode)
    return CodeSpec(
        mother_len=N,
        payload_len=K,
        tx_len=N,
        frozen_mask=select_information_set(rel, K),
        pattern=RateMatchPattern(),
        design_snr_db=design_snr_db,
        construction_method="GA_uniform",
        g_mode=g_mode,
    )


def shortening_pattern(method: str, N: int, M: int) -> RateMatchPattern:
    """Codeword positions to remove for one of the baseline schemes.

    ``NAT_PD``: the last N - M positions in natural order (valid because
    the natural-order generator is lower triangular).  ``RQUP``: the N - M
    positions whose bit-reversed indices are largest.  ``CW``: iterative
    weight-1 column reduction of the generator matrix; when several columns
    reach weight 1, the one with the smallest original column weight goes
    first (lowest index second), staying true to the column-weight
    criterion the method is named for.
    """
    N = _check_power_of_two(N)
    if not N // 2 < M < N:
        raise ConstructionError(f"shortened length must satisfy N/2 < M < N, got M={M}, N={N}")
    r = N - M
    if method == "NAT_PD":
        idx = np.arange(M, N)
    elif method == "RQUP":
        n = int(np.log2(N))
        rev = bit_reverse(np.arange(N), n)
        idx = np.flatnonzero(rev >= M)
    elif method == "CW":
        gen = np.array([[1]], dtype=bool)
        while gen.shape[0] < N:
            gen = np.kron(np.array([[1, 0], [1, 1]], dtype=bool), gen)
        original_weight = gen.sum(axis=0)
        row_active = np.ones(N, dtype=bool)
        col_active = np.ones(N, dtype=bool)
        removed = []
        for _ in range(r):
            weights = gen[row_active].sum(axis=0)
            ones = np.flatnonzero(col_active & (weights == 1))
            if ones.size == 0:
                raise ConstructionError("generator reduction found no weight-1 column")
            col = int(ones[np.argmin(original_weight[ones])])
            row = int(np.flatnonzero(row_active & gen[:, col])[0])
            removed.append(col)
            row_active[row] = False
            col_active[col] = False
        idx = np.sort(np.asarray(removed, dtype=np.int64))
    else:
        raise ConstructionError(f"unknown shortening method {method!r}")
    return RateMatchPattern("shorten", idx)


def build_shortened_code(
    N: int,
    M: int,
    K: int,
    pattern,
    design_snr_db: float = 0.0,
    g_mode: str = "sum",
    repolarize: bool = True,
) -> CodeSpec:
    """Shortened code of transmitted length M from a length-N mother code.

    With ``repolarize`` (the default) the stage-0 reliabilities of the
    inputs matched to shortened positions are zeroed and the whole vector
    is re-evolved before selecting the information set (the NUPGA scheme).
    With ``repolarize=False`` the information set keeps the mother code's
    reliability order, merely skipping the pattern positions (the behaviour
    of the CW / RQUP / PD baselines).
    """
    N = _check_power_of_two(N)
    if M == N:
        return build_mother_code(N, K, design_snr_db, g_mode)
    pattern = normalize_pattern(pattern, N, M, "shorten")
    if not 0 < K <= M:
        raise ConstructionError(f"payload length {K} outside (0, {M}]")
    stage0 = np.full(N, design_snr_to_llr_mean(design_snr_db))
    if repolarize:
        stage0[pattern.indices] = 0.0
        rel = evolve_reliabilities(stage0, g_mode)
    else:
        rel = evolve_reliabilities(stage0, g_mode)
        rel[pattern.indices] = 0.0
    frozen = select_information_set(rel, K)
    frozen[pattern.indices] = True
    if int(np.count_nonzero(~frozen)) != K:
        raise ConstructionError("information set collided with the shortening pattern")
    return CodeSpec(
        mother_len=N,
        payload_len=K,
        tx_len=M,
        frozen_mask=frozen,
        pattern=pattern,
        design_snr_db=design_snr_db,
        construction_method="NUPGA_shortened" if repolarize else "GA_uniform",
        g_mode=g_mode,
    )


def build_extended_code(
    N: int,
    delta_M: int,
    K: int,
    design_snr_db: float = 0.0,
    g_mode: str = "sum",
    repeat="tail",
) -> CodeSpec:
    """Extended code of length N + delta_M by repeating codeword positions.

    Each repeated position is observed twice at the receiver, so its
    stage-0 LLR mean doubles (8*S instead of 4*S); the vector is then
    evolved and the information set re-selected.  ``repeat`` chooses the
    repeated positions: ``"tail"`` (default) repeats the last ``delta_M``
    positions, ``"weak_info"`` repeats the positions of the mother code's
    least reliable information bits, and an explicit index array is used
    as given.
    """
    N = _check_power_of_two(N)
    delta_M = int(delta_M)
    if delta_M == 0:
        return build_mother_code(N, K, design_snr_db, g_mode)
    if not 0 < delta_M < N // 2:
        raise ConstructionError(f"extension length must satisfy 0 < delta_M < N/2, got {delta_M}")
    if not 0 < K <= N:
        raise ConstructionError(f"payload length {K} outside (0, {N}]")
    base = design_snr_to_llr_mean(design_snr_db)
    if isinstance(repeat, str) and repeat == "tail":
        positions = np.arange(N - delta_M, N)
    elif isinstance(repeat, str) and repeat == "weak_info":
        mother = build_mother_code(N, K, design_snr_db, g_mode)
        rel = evolve_reliabilities(np.full(N, base), g_mode)
        info = mother.info_positions
        if delta_M > info.size:
            raise ConstructionError("weak_info extension needs delta_M <= K")
        positions = np.sort(info[np.argsort(rel[info], kind="stable")[:delta_M]])
    elif isinstance(repeat, str):
        raise ConstructionError(f"unknown repeat rule {repeat!r}")
    else:
        positions = np.sort(np.asarray(repeat, dtype=np.int64))
        if positions.size != delta_M:
            raise ConstructionError("explicit repeat positions must have length delta_M")
    pattern = RateMatchPattern("extend", positions)
    if pattern.indices.size and pattern.indices[-1] >= N:
        raise ConstructionError("repeat positions exceed the mother length")
    stage0 = np.full(N, base)
    stage0[pattern.indices] += base
    rel = evolve_reliabilities(stage0, g_mode)
    return CodeSpec(
        mother_len=N,
        payload_len=K,
        tx_len=N + delta_M,
        frozen_mask=select_information_set(rel, K),
        pattern=pattern,
        design_snr_db=design_snr_db,
        construction_method="NUPGA_extended",
        g_mode=g_mode,
    )


def bec_construct(erasures, K: int) -> np.ndarray:
    """Frozen mask from exact BEC evolution of a per-position erasure vector.

    The K positions with the smallest evolved erasure probability are
    unfrozen; ties break toward the lower index.
    """
    final = evolve_bec(erasures)
    K = int(K)
    if not 0 <= K <= final.size:
        raise ConstructionError(f"payload length {K} outside [0, {final.size}]")
    order = np.argsort(final, kind="stable")
    mask = np.ones(final.size, dtype=bool)
    mask[order[:K]] = False
    return mask
