"""Brute-force term oracles, independent of any recurrence.

Used to validate the catalog recurrences and their initial values.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import comb
from fractions import Fraction


def _paths(n: int, steps: tuple[int, ...]) -> int:
    """Lattice paths of n steps from height 0 to 0 staying >= 0."""
    heights = {0: 1}
    for t in range(n):
        nxt: dict[int, int] = {}
        for h, cnt in heights.items():
            for s in steps:
                h2 = h + s
                if h2 < 0:
                    continue
                nxt[h2] = nxt.get(h2, 0) + cnt
        heights = nxt
    return heights.get(0, 0)


def dyck(n: int) -> int:
    """Dyck paths of semilength n (Catalan numbers)."""
    return _paths(2 * n, (1, -1))


def motzkin(n: int) -> int:
    """Motzkin paths of length n."""
    return _paths(n, (1, 0, -1))


def fine(n: int) -> int:
    """Dyck paths of semilength n with no hill (peak at height 1)."""
    # state: (height, last step was an up step from height 0)
    states = Counter({(0, False): 1})
    for _ in range(2 * n):
        nxt: Counter = Counter()
        for (h, fresh), cnt in states.items():
            nxt[(h + 1, h == 0)] += cnt
            if h > 0 and not (fresh and h == 1):
                nxt[(h - 1, False)] += cnt
        states = nxt
    return states[(0, False)]


def franel(n: int) -> int:
    return sum(comb(n, k) ** 3 for k in range(n + 1))


def clf(n: int) -> int:
    """Catalan-Larcombe-French numbers from their binomial-sum definition."""
    total = sum(Fraction(comb(2 * k, k) ** 2 * comb(2 * n - 2 * k, n - k) ** 2, comb(n, k))
                for k in range(n + 1))
    assert total.denominator == 1
    return int(total)


def binary_matrices(n: int, line_sum: int = 3) -> int:
    """n x n 0-1 matrices with every row and column summing to line_sum.

    Rows are placed one at a time; the state is the multiset of column
    sums so far, stored as counts of columns per current sum.
    """
    if line_sum > n:
        return 1 if n == 0 else 0

    @lru_cache(maxsize=None)
    def go(rows_left: int, profile: tuple[int, ...]) -> int:
        if rows_left == 0:
            return 1 if all(c == 0 for c in profile[:-1]) else 0
        total = 0
        # choose how many ones to put in columns of each current sum
        def place(j: int, left: int, prof: list[int], ways: int):
            nonlocal total
            if j == line_sum:  # columns already full cannot take more
                if left == 0:
                    total += ways * go(rows_left - 1, tuple(prof))
                return
            avail = profile[j]
            for take in range(min(avail, left) + 1):
                new = list(prof)
                new[j] -= take
                new[j + 1] += take
                place(j + 1, left - take, new, ways * comb(avail, take))
        place(0, line_sum, list(profile), 1)
        return total

    start = [0] * (line_sum + 1)
    start[0] = n
    return go(n, tuple(start))


def binary_matrices_bruteforce(n: int, line_sum: int = 3) -> int:
    """Direct enumeration over rows (small n only)."""
    from itertools import combinations, product
    rows = list(combinations(range(n), line_sum))
    count = 0
    for choice in product(rows, repeat=n):
        cols = [0] * n
        for row in choice:
            for j in row:
                cols[j] += 1
        if all(c == line_sum for c in cols):
            count += 1
    return count
