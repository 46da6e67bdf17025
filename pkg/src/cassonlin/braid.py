"""Braid words, free-group words and the Artin action of B_n on F_n.

Conventions: the braid group acts on the right, ``x_i -> x_i^sigma``, and
a word ``b1 b2`` acts by applying ``b1`` first.  A positive generator acts as

    sigma_i:  x_i -> x_{i+1},   x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}

so that ``sigma_1^2`` sends ``(x, y)`` to ``(y^-1 x y, y^-1 x^-1 y x y)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import BraidSyntaxError, NotTwoComponents

_TERM = re.compile(r"s([1-9][0-9]*)(?:\^(-?[1-9][0-9]*))?")


@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.strand_count < 1:
            raise ValueError("strand_count must be positive")
        for gen, sign in self.letters:
            if not 1 <= gen < self.strand_count:
                raise IndexError(f"generator s{gen} not in B_{self.strand_count}")
            if sign not in (1, -1):
                raise ValueError(f"letter sign must be +-1, got {sign}")

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.strand_count != other.strand_count:
            raise ValueError("strand counts differ")
        return BraidWord(self.strand_count, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.strand_count, tuple((g, -s) for g, s in reversed(self.letters)))

    def mirror(self) -> BraidWord:
        return BraidWord(self.strand_count, tuple((g, -s) for g, s in self.letters))

    def __str__(self) -> str:
        terms = []
        for (g, s), run in itertools.groupby(self.letters):
            power = s * len(list(run))
            terms.append(f"s{g}" if power == 1 else f"s{g}^{power}")
        return " ".join(terms)


def parse_braid(text: str, n: int) -> BraidWord:
    """Parse ``"s1^2 s2^-1 ..."`` into a word in B_n.

    Whitespace between terms is optional; exponents are expanded into
    repeated letters.
    """
    letters: list[tuple[int, int]] = []
    pos = 0
    s = text.strip()
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TERM.match(s, pos)
        if m is None:
            raise BraidSyntaxError(f"malformed braid term at position {pos}: {s[pos:]!r}")
        gen = int(m.group(1))
        power = int(m.group(2)) if m.group(2) else 1
        if gen >= n:
            raise IndexError(f"generator s{gen} not in B_{n}")
        sign = 1 if power > 0 else -1
        letters.extend([(gen, sign)] * abs(power))
        pos = m.end()
    return BraidWord(n, tuple(letters))


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word; letters are ``(generator, exponent)`` with generators 1-based."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> FreeWord:
        return cls(((i, e),))

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> FreeWord:
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def substitute(self, images) -> FreeWord:
        """Replace each ``x_g`` by ``images[g-1]``."""
        out: list[tuple[int, int]] = []
        for g, e in self.letters:
            w = images[g - 1]
            out.extend(w.letters if e == 1 else w.inverse().letters)
        return FreeWord(tuple(out))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{g}" if e == 1 else f"x{g}^-1" for g, e in self.letters)


def _reduce(letters) -> tuple[tuple[int, int], ...]:
    stack: list[tuple[int, int]] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"exponent must be +-1, got {e}")
        if stack and stack[-1] == (g, -e):
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


@dataclass(frozen=True)
class BraidAutomorphism:
    n: int
    images: tuple[FreeWord, ...]

    @classmethod
    def identity(cls, n: int) -> BraidAutomorphism:
        return cls(n, tuple(FreeWord.gen(i) for i in range(1, n + 1)))

    def then(self, other: BraidAutomorphism) -> BraidAutomorphism:
        """The automorphism obtained by applying ``self`` first, then ``other``."""
        return BraidAutomorphism(self.n, tuple(w.substitute(other.images) for w in self.images))

    def apply(self, w: FreeWord) -> FreeWord:
        return w.substitute(self.images)


def generator_action(n: int, i: int, sign: int) -> BraidAutomorphism:
    x = [FreeWord.gen(g) for g in range(1, n + 1)]
    a, b = x[i - 1], x[i]
    images = list(x)
    if sign == 1:
        images[i - 1] = b
        images[i] = b.inverse() * a * b
    else:
        images[i - 1] = a * b * a.inverse()
        images[i] = a
    return BraidAutomorphism(n, tuple(images))


def artin_action(b: BraidWord) -> BraidAutomorphism:
    auto = BraidAutomorphism.identity(b.strand_count)
    for gen, sign in b.letters:
        auto = auto.then(generator_action(b.strand_count, gen, sign))
    return auto


def permutation(b: BraidWord) -> list[int]:
    """``perm[p]`` is the bottom position (0-based) of the strand starting at position ``p``."""
    at = list(range(b.strand_count))  # at[pos] = strand currently at pos
    for gen, _ in b.letters:
        at[gen - 1], at[gen] = at[gen], at[gen - 1]
    perm = [0] * b.strand_count
    for pos, strand in enumerate(at):
        perm[strand] = pos
    return perm


def closure_components(b: BraidWord) -> list[frozenset[int]]:
    """Cycles of the braid permutation, as sets of 1-based strand positions."""
    perm = permutation(b)
    seen: set[int] = set()
    comps = []
    for start in range(b.strand_count):
        if start in seen:
            continue
        cyc = set()
        p = start
        while p not in cyc:
            cyc.add(p)
            p = perm[p]
        seen |= cyc
        comps.append(frozenset(q + 1 for q in cyc))
    return comps


def linking_number(b: BraidWord) -> int:
    comps = closure_components(b)
    if len(comps) != 2:
        raise NotTwoComponents(f"closure of {b!s} has {len(comps)} component(s)")
    component_of = {p - 1: idx for idx, c in enumerate(comps) for p in c}
    at = list(range(b.strand_count))
    total = 0
    for gen, sign in b.letters:
        left, right = at[gen - 1], at[gen]
        if component_of[left] != component_of[right]:
            total += sign
        at[gen - 1], at[gen] = right, left
    if total % 2:
        raise AssertionError("odd inter-component crossing count")
    return total // 2
