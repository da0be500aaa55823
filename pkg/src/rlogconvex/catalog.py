"""Built-in sequences with their recurrences, initial values and term oracles."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import oracles
from .recurrence import Recurrence, SequenceValues, evaluate_terms, parse_recurrence, plug_back


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    recurrence: Recurrence
    initial: SequenceValues
    provenance: str
    oracle: Callable[[int], int]
    description: str = ""

    def terms(self, upto: int) -> SequenceValues:
        return evaluate_terms(self.recurrence, self.initial, upto)


_SOURCES = {
    "motzkin": (
        "(n+4)*a(n+2) - (2*n+5)*a(n+1) - (3*n+3)*a(n) = 0",
        [1, 1], "published", oracles.motzkin, "Motzkin numbers"),
    "h3": (
        "H(n) - (9*n^2+42*n+37)/((n+1)^2*(3*n+10))*H(n+1)"
        " - 3*(3*n+13)/((n+2)*(n+1)^2*(3*n+10))*H(n+2)"
        " - 9*(3*n^2+19*n+32)/((n+3)*(n+2)^2*(n+1)^2*(3*n+10))*H(n+3)"
        " + 12*(3*n+7)/((n+4)*(3*n+10)*(n+3)^2*(n+2)^2*(n+1)^2)*H(n+4) = 0",
        [1, 0, 0, 1], "published",
        oracles.binary_matrices, "n x n 0-1 matrices with all line sums 3"),
    "catalan": (
        "(n+2)*a(n+1) - (4*n+2)*a(n) = 0",
        [1], "derived", oracles.dyck, "Catalan numbers"),
    "fine": (
        "2*(n+3)*a(n+2) - (7*n+9)*a(n+1) - 2*(2*n+3)*a(n) = 0",
        [1, 0], "derived", oracles.fine, "Fine numbers (Dyck paths without hills)"),
    "franel3": (
        "(n+2)^2*a(n+2) - (7*n^2+21*n+16)*a(n+1) - 8*(n+1)^2*a(n) = 0",
        [1, 2], "derived", oracles.franel, "Franel numbers sum_k C(n,k)^3"),
    "clf": (
        "(n+2)^2*a(n+2) - 8*(3*n^2+9*n+7)*a(n+1) + 128*(n+1)^2*a(n) = 0",
        [1, 8], "derived", oracles.clf, "Catalan-Larcombe-French numbers"),
}

NAMES = tuple(_SOURCES)


@lru_cache(maxsize=None)
def get(name: str) -> CatalogEntry:
    """Catalog entry by name; initial values are plug-back checked on load."""
    try:
        text, inits, provenance, oracle, description = _SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown sequence {name!r}; known: {', '.join(NAMES)}") from None
    rec = parse_recurrence(text, valid_from=0)
    initial = SequenceValues(0, list(inits))
    values = evaluate_terms(rec, initial, 3 * rec.d + 4)
    if not plug_back(rec, values):
        raise AssertionError(f"catalog entry {name}: initial values violate the recurrence")
    return CatalogEntry(name, rec, initial, provenance, oracle, description)


def validate(entry: CatalogEntry, upto: int = 12) -> list[int]:
    """Indices where the recurrence and the oracle disagree (empty when consistent)."""
    values = entry.terms(upto)
    return [n for n in range(upto + 1) if values[n] != entry.oracle(n)]
