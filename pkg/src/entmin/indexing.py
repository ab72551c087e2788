"""Shared flat-index conventions for multi-party amplitude vectors.

Everything in this package stores an n-party state of local dimension d as
a dense vector of length d**n.  The multi-index (j_1, ..., j_n), with each
j_i in [0, d), maps to the flat index

    sum_i j_i * d**(n - i)

so party 1 is the most significant digit (big-endian, C order).  For d = 2
this means party i owns bit position n - i of the flat index, counting from
the least significant bit.  Party labels are 1-based in every public API;
this module is the only place the label/axis arithmetic lives.
"""

from __future__ import annotations

from .errors import CapacityError, ValidationError

# Dense vectors are capped at 2**22 amplitudes; larger spaces are rejected
# instead of silently thrashing memory.
MAX_AMPLITUDES = 1 << 22


def check_capacity(n: int, d: int) -> None:
    """Reject (n, d) whose amplitude count d**n exceeds MAX_AMPLITUDES."""
    if n < 1:
        raise ValidationError(f"party count must be >= 1, got {n}")
    if d < 2:
        raise ValidationError(f"local dimension must be >= 2, got {d}")
    if d**n > MAX_AMPLITUDES:
        raise CapacityError(
            f"state of {n} parties with local dimension {d} needs {d}**{n} "
            f"amplitudes, above the cap of 2**22"
        )


def flat_from_digits(digits, d: int) -> int:
    """Flat index of a multi-index, first digit most significant."""
    j = 0
    for digit in digits:
        if not 0 <= digit < d:
            raise ValidationError(f"digit {digit} out of range [0, {d})")
        j = j * d + digit
    return j


def digits_from_flat(j: int, n: int, d: int) -> tuple[int, ...]:
    """Multi-index (j_1, ..., j_n) of a flat index, party 1 first."""
    if not 0 <= j < d**n:
        raise ValidationError(f"flat index {j} out of range for {n} parties of dim {d}")
    out = []
    for _ in range(n):
        out.append(j % d)
        j //= d
    return tuple(reversed(out))


def axis_of_party(party: int, n: int) -> int:
    """Tensor axis (0-based) of a 1-based party label."""
    if not 1 <= party <= n:
        raise ValidationError(f"party label {party} out of range [1, {n}]")
    return party - 1


def parties_to_axes(parties, n: int) -> tuple[int, ...]:
    """Sorted 0-based axes for a collection of 1-based party labels."""
    labels = sorted(set(int(p) for p in parties))
    if labels and not (1 <= labels[0] and labels[-1] <= n):
        raise ValidationError(f"party labels {labels} out of range [1, {n}]")
    if len(labels) != len(list(parties)):
        raise ValidationError("duplicate party labels")
    return tuple(p - 1 for p in labels)


def bit_of_party(party: int, n: int) -> int:
    """Bit position (from LSB) that a 1-based party occupies when d = 2."""
    return n - axis_of_party(party, n) - 1


def mask_of_parties(parties, n: int) -> int:
    """Bitmask over flat-index bits covering the given 1-based parties (d = 2)."""
    mask = 0
    for p in set(parties):
        mask |= 1 << bit_of_party(p, n)
    return mask
