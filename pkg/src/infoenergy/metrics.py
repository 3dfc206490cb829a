"""Entropy and mutual-information evaluations on finite alphabets.

All logarithms are base 2 and all rates are bits per channel use, with the
convention 0*log(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import AlphabetMismatchError, DmChannel, EnergyFn, Pmf


def _probs(p) -> np.ndarray:
    return p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)


def entropy_bits(probs: np.ndarray) -> np.ndarray:
    """Row-wise entropy of an array whose last axis holds probabilities."""
    p = np.asarray(probs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p), 0.0)
    return -terms.sum(axis=-1)


def entropy(p) -> float:
    """Shannon entropy H(p) in bits."""
    return float(entropy_bits(_probs(p)))


def conditional_output_entropy(p_in, W: np.ndarray) -> float:
    """H(Y|X) for input pmf p_in and transition matrix W of shape (|X|, |Y|)."""
    return float(_probs(p_in) @ entropy_bits(W))


def mutual_information(p_in, ch: DmChannel) -> float:
    """I(X;Y) in bits for a point-to-point channel."""
    if ch.is_mac:
        raise AlphabetMismatchError("expected a point-to-point channel")
    p = _probs(p_in)
    W = ch.transition
    if p.size != W.shape[0]:
        raise AlphabetMismatchError(
            f"input pmf length {p.size} != input alphabet size {W.shape[0]}"
        )
    out = p @ W
    return max(float(entropy_bits(out)) - conditional_output_entropy(p, W), 0.0)


@dataclass(frozen=True, eq=False)
class TimeSharingPolicy:
    """Coordination variable Q with per-q input pmfs for the two senders.

    The encoders agree on a shared Q sequence and switch codebooks with it;
    mixing over Q convexifies the achievable region.
    """

    q_pmf: Pmf
    inputs: tuple  # tuple of (Pmf, Pmf) pairs, one per q

    def __post_init__(self):
        pairs = tuple(tuple(pair) for pair in self.inputs)
        if len(pairs) != len(self.q_pmf):
            raise ValueError("one input pair is required per q")
        if any(len(pair) != 2 for pair in pairs):
            raise ValueError("each q needs a (p(x1|q), p(x2|q)) pair")
        n1 = len(pairs[0][0])
        n2 = len(pairs[0][1])
        if any(len(p1) != n1 or len(p2) != n2 for p1, p2 in pairs):
            raise AlphabetMismatchError("per-q pmfs must share alphabets")
        object.__setattr__(self, "inputs", pairs)

    def __len__(self) -> int:
        return len(self.q_pmf)

    @classmethod
    def single(cls, p1: Pmf, p2: Pmf) -> "TimeSharingPolicy":
        return cls(Pmf([1.0]), ((p1, p2),))


def _per_q_informations(p1: np.ndarray, p2: np.ndarray, W: np.ndarray):
    """(I(X1;Y|X2), I(X2;Y|X1), I(X1,X2;Y), output pmf) for one q."""
    h_rows = entropy_bits(W)  # (n1, n2)
    h_y_given_both = float(p1 @ h_rows @ p2)

    out = np.einsum("i,j,ijy->y", p1, p2, W)
    i_sum = float(entropy_bits(out)) - h_y_given_both

    # Condition on each value of the other sender and average.
    out_given_x2 = np.einsum("i,ijy->jy", p1, W)  # (n2, ny)
    i1 = float(p2 @ (entropy_bits(out_given_x2) - p1 @ h_rows))
    out_given_x1 = np.einsum("j,ijy->iy", p2, W)  # (n1, ny)
    i2 = float(p1 @ (entropy_bits(out_given_x1) - h_rows @ p2))
    return max(i1, 0.0), max(i2, 0.0), max(i_sum, 0.0), out


def mac_mutual_informations(pol: TimeSharingPolicy, ch: DmChannel, b: EnergyFn):
    """Rate-region bounds and received energy for a time-sharing policy.

    Returns (I1, I2, Isum, EbY) where I1 = I(X1;Y|X2,Q), I2 = I(X2;Y|X1,Q),
    Isum = I(X1,X2;Y|Q) as p(q)-weighted averages, and EbY = E[b(Y)] under
    the Q-mixture output pmf.
    """
    if not ch.is_mac:
        raise AlphabetMismatchError("expected a two-sender channel")
    n1, n2, ny = ch.transition.shape
    if len(pol.inputs[0][0]) != n1 or len(pol.inputs[0][1]) != n2:
        raise AlphabetMismatchError("policy pmfs do not match channel inputs")
    if len(b) != ny:
        raise AlphabetMismatchError("energy table does not match output alphabet")

    i1 = i2 = i_sum = 0.0
    out_mix = np.zeros(ny)
    for pq, (p1, p2) in zip(pol.q_pmf.probs, pol.inputs):
        c1, c2, cs, out = _per_q_informations(p1.probs, p2.probs, ch.transition)
        i1 += pq * c1
        i2 += pq * c2
        i_sum += pq * cs
        out_mix += pq * out
    eby = float(out_mix @ b.values)
    return float(i1), float(i2), float(i_sum), eby
