"""Sparse bosonic Fock kets and normal-ordered coincidence expectations.

This is deliberately brute force: kets are dictionaries from occupation
patterns to amplitudes, and annihilators act term by term.  It shares no
algebra with the closed-form correlation expressions it is used to check.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass

from .modes import ModeKey

MAX_PHOTONS = 2


@dataclass(frozen=True)
class FockKet:
    """Map from occupation pattern to amplitude.

    A pattern is a sorted tuple of ModeKey with repetition, so ``(m, m)``
    is the doubly occupied state |2_m>.  Sorting is lexicographic in
    (kind, k_x, k_y, parity).
    """

    amplitudes: dict

    def __post_init__(self):
        for pattern in self.amplitudes:
            if len(pattern) > MAX_PHOTONS:
                raise ValueError(f"pattern with {len(pattern)} photons exceeds the two-photon cap")

    @classmethod
    def vacuum(cls) -> "FockKet":
        return cls({(): 1.0 + 0j})

    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())

    def inner(self, other: "FockKet") -> complex:
        return sum(a.conjugate() * other.amplitudes.get(p, 0) for p, a in self.amplitudes.items())


def lift(state) -> FockKet:
    """Turn a pair superposition into a ket, b+_m b+_n |0> per pair."""
    out = defaultdict(complex)
    for pair in state.pairs:
        mo, me = pair.mode_o, pair.mode_e
        factor = math.sqrt(2.0) if mo == me else 1.0
        out[tuple(sorted((mo, me)))] += factor * pair.amp
    return FockKet(dict(out))


def apply_form(form, ket: FockKet) -> FockKet:
    """Apply a scalar annihilation form sum_m c_m b_m, times exp(i phase)."""
    coeffs = form.coefficient_map
    out = defaultdict(complex)
    for pattern, amp in ket.amplitudes.items():
        counts = Counter(pattern)
        for mode, n in counts.items():
            c = coeffs.get(mode)
            if c is None:
                continue
            i = pattern.index(mode)
            out[pattern[:i] + pattern[i + 1 :]] += c * math.sqrt(n) * amp
    if form.phase:
        rot = complex(math.cos(form.phase), math.sin(form.phase))
        return FockKet({p: rot * a for p, a in out.items()})
    return FockKet(dict(out))


def fourth_order_expectation(psi: FockKet, A, B) -> float:
    """Normal-ordered <psi| A+ B+ B A |psi>, the squared norm of B A |psi>."""
    return apply_form(B, apply_form(A, psi)).norm_squared()
