"""Small library of named Lie algebras with their known verdicts.

Indices are zero-based: ``(i, j, k): c`` means [e_i, e_j] = c e_k + ...
``expected`` maps a question to ``"yes"`` or ``"no"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .brackets import BracketTensor, direct_sum


@dataclass(frozen=True)
class Entry:
    name: str
    mu: BracketTensor
    expected: dict = field(default_factory=dict)
    note: str = ""

    @property
    def nilpotent(self) -> bool:
        return "einstein_nilradical" in self.expected


def _b(n, coeffs, name):
    return BracketTensor(n, coeffs, name).checked()


def _filiform(n, name):
    return _b(n, {(0, i, i + 1): 1 for i in range(1, n - 1)}, name)


H3 = _b(3, {(0, 1, 2): 1}, "h3")
HYPERBOLIC = _b(2, {(0, 1, 1): 1}, "hyperbolic")
E2 = _b(3, {(0, 1, 2): 1, (0, 2, 1): -1}, "e2")
SOL = _b(3, {(0, 1, 1): 1, (0, 2, 2): -1}, "sol")
L4 = _filiform(4, "l4")
L5 = _filiform(5, "l5")
L6 = _filiform(6, "l6")
L5B = _b(5, {(0, 1, 2): 1, (0, 2, 3): 1, (0, 3, 4): 1, (1, 2, 4): 1}, "l5b")
H5 = _b(5, {(0, 1, 4): 1, (2, 3, 4): 1}, "h5")
FREE_2STEP_3 = _b(6, {(0, 1, 3): 1, (0, 2, 4): 1, (1, 2, 5): 1}, "free-2-step-3")
RH3 = _b(3, {(0, 1, 1): 1, (0, 2, 2): 1}, "real-hyperbolic-3")
CH2 = _b(4, {(0, 1, 1): 1, (0, 2, 2): 1, (0, 3, 3): 2, (1, 2, 3): 1}, "complex-hyperbolic-2")
# nice basis; the Gram-matrix criterion for nice nilpotent algebras fails
N7 = _b(7, {(0, 1, 4): 1, (0, 5, 6): 1, (1, 2, 6): 1, (1, 3, 5): -1, (2, 3, 4): 1, (3, 4, 6): 1}, "n7-nice")


def abelian(n: int) -> BracketTensor:
    return BracketTensor.zero(n, f"abelian-{n}")


def _sum(a, b, name):
    return direct_sum(a, b, name).checked()


ENTRIES: tuple[Entry, ...] = (
    Entry("abelian-3", abelian(3), {"einstein_nilradical": "yes"}),
    Entry("h3", H3, {"einstein_nilradical": "yes"}),
    Entry("h3+r", _sum(H3, abelian(1), "h3+r"), {"einstein_nilradical": "yes"}),
    Entry("l4", L4, {"einstein_nilradical": "yes"}),
    Entry("l5", L5, {"einstein_nilradical": "yes"}),
    Entry("l5b", L5B, {"einstein_nilradical": "yes"}),
    Entry("h5", H5, {"einstein_nilradical": "yes"}),
    Entry("free-2-step-3", FREE_2STEP_3, {"einstein_nilradical": "yes"}),
    Entry("h3+h3", _sum(H3, H3, "h3+h3"), {"einstein_nilradical": "yes"}),
    Entry("l6", L6, {"einstein_nilradical": "yes"}),
    Entry("n7-nice", N7, {"einstein_nilradical": "no"}, "non-Einstein nilradical with a nice basis"),
    Entry(
        "hyperbolic",
        HYPERBOLIC,
        {"admits_flat": "no", "admits_negative_einstein": "yes", "admits_solsoliton": "yes"},
    ),
    Entry("e2", E2, {"admits_flat": "yes", "admits_negative_einstein": "no", "admits_solsoliton": "no"}),
    Entry("sol", SOL, {"admits_flat": "no", "admits_negative_einstein": "no", "admits_solsoliton": "yes"}),
    Entry(
        "hyperbolic+r",
        _sum(HYPERBOLIC, abelian(1), "hyperbolic+r"),
        {"admits_flat": "no", "admits_negative_einstein": "no", "admits_solsoliton": "yes"},
    ),
    Entry(
        "hyperbolic+hyperbolic",
        _sum(HYPERBOLIC, HYPERBOLIC, "hyperbolic+hyperbolic"),
        {"admits_flat": "no", "admits_negative_einstein": "yes", "admits_solsoliton": "yes"},
    ),
    Entry(
        "e2+r",
        _sum(E2, abelian(1), "e2+r"),
        {"admits_flat": "yes", "admits_negative_einstein": "no", "admits_solsoliton": "no"},
    ),
    Entry(
        "real-hyperbolic-3",
        RH3,
        {"admits_flat": "no", "admits_negative_einstein": "yes", "admits_solsoliton": "yes"},
    ),
    Entry(
        "complex-hyperbolic-2",
        CH2,
        {"admits_flat": "no", "admits_negative_einstein": "yes", "admits_solsoliton": "yes"},
    ),
)

BY_NAME = {e.name: e for e in ENTRIES}


def get(name: str) -> Entry:
    try:
        return BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}; known: {', '.join(BY_NAME)}") from None


__all__ = ["BY_NAME", "ENTRIES", "Entry", "abelian", "get"]
