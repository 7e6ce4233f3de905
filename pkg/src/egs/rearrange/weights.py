"""Weight tables a_l: finitely many explicit rationals plus a geometric tail.

Tail rules
    none            a_l = 0 beyond the explicit entries
    pow2 <r0> <c>   a_{2^r} = c / 2^r for r >= r0, zero elsewhere beyond 2^r0;
                    explicit entries must lie below 2^r0
    halve <l0>      a_l = a_{l/2} / 2 for even l >= l0 and a_l = 0 for odd
                    l >= l0; explicit entries must lie below l0

Every tail is a finite union of chains (b, w): a_{b 2^j} = w / 2^j, j >= 0.

File format: a "D: d1 d2 ..." header, "a <l> <num>/<den>" lines and a
"tail <rule> <params>" footer.  Lines starting with '#' are comments; a
"# alpha <num>/<den>" comment records the intended ratio.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from ..ntheory.primes import factorize, valuation


class WeightFormatError(ValueError):
    pass


@dataclass
class WeightTable:
    explicit: dict  # l -> Fraction, all >= 0
    tail: tuple = ("none",)
    downset: tuple = ()
    alpha: Fraction | None = None
    _chains: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.explicit = {int(l): Fraction(a) for l, a in self.explicit.items() if Fraction(a) != 0}
        if any(a < 0 for a in self.explicit.values()) or any(l < 1 for l in self.explicit):
            raise ValueError("weights must be nonnegative and indexed by naturals")
        rule = self.tail[0]
        if rule == "pow2":
            r0, c = int(self.tail[1]), Fraction(self.tail[2])
            if c < 0:
                raise ValueError("tail constant must be nonnegative")
            self.tail = ("pow2", r0, c)
            if self.explicit and max(self.explicit) >= 2**r0:
                raise ValueError("explicit entries must lie below 2^r0 under the pow2 tail")
            self._chains = [(2**r0, c / 2**r0)] if c else []
        elif rule == "halve":
            l0 = int(self.tail[1])
            self.tail = ("halve", l0)
            if self.explicit and max(self.explicit) >= l0:
                raise ValueError("explicit entries must lie below l0 under the halve tail")
            self._chains = sorted((2 * l, a / 2) for l, a in self.explicit.items() if 2 * l >= l0)
        elif rule == "none":
            self.tail = ("none",)
            self._chains = []
        else:
            raise ValueError(f"unknown tail rule {rule!r}")

    @property
    def chains(self) -> list[tuple[int, Fraction]]:
        return list(self._chains)

    @property
    def max_explicit(self) -> int:
        return max(self.explicit, default=0)

    @property
    def max_base(self) -> int:
        return max((b for b, _ in self._chains), default=0)

    def weight(self, l: int) -> Fraction:
        if l in self.explicit:
            return self.explicit[l]
        for b, w in self._chains:
            q, r = divmod(l, b)
            if r == 0 and q & (q - 1) == 0:
                return w / q
        return Fraction(0)

    def support_upto(self, X) -> list[tuple[int, Fraction]]:
        """All (l, a_l) with a_l > 0 and l <= X, sorted by l."""
        out = [(l, a) for l, a in self.explicit.items() if l <= X]
        for b, w in self._chains:
            l, a = b, w
            while l <= X:
                out.append((l, a))
                l, a = 2 * l, a / 2
        return sorted(out)

    def tail_sum(self, l) -> Fraction:
        """sum_{l' > l} a_{l'} in closed form (l may be any real >= 0)."""
        l = Fraction(l)
        s = sum((a for k, a in self.explicit.items() if k > l), Fraction(0))
        for b, w in self._chains:
            j = 0
            while b * 2**j <= l:
                j += 1
            s += 2 * w / 2**j
        return s

    def nu_sum(self, p: int) -> Fraction:
        """sum_l nu_p(l) a_l in closed form."""
        s = sum((valuation(l, p) * a for l, a in self.explicit.items()), Fraction(0))
        for b, w in self._chains:
            # sum_j (nu_p(b) + j [p = 2]) w / 2^j = 2 w nu_p(b) + 2 w [p = 2]
            s += 2 * w * valuation(b, p) + (2 * w if p == 2 else 0)
        return s

    def primes_used(self) -> set[int]:
        ps = set()
        for l in list(self.explicit) + [b for b, _ in self._chains]:
            ps.update(factorize(l))
        return ps

    def total(self) -> Fraction:
        return self.tail_sum(0)


def format_weight_table(W: WeightTable) -> str:
    lines = []
    if W.alpha is not None:
        lines.append(f"# alpha {W.alpha.numerator}/{W.alpha.denominator}")
    lines.append("D: " + " ".join(str(d) for d in sorted(W.downset)))
    for l in sorted(W.explicit):
        a = W.explicit[l]
        lines.append(f"a {l} {a.numerator}/{a.denominator}")
    if W.tail[0] == "pow2":
        c = W.tail[2]
        lines.append(f"tail pow2 {W.tail[1]} {c.numerator}/{c.denominator}")
    elif W.tail[0] == "halve":
        lines.append(f"tail halve {W.tail[1]}")
    else:
        lines.append("tail none")
    return "\n".join(lines) + "\n"


def write_weight_table(W: WeightTable, dest) -> None:
    text = format_weight_table(W)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def parse_weight_table(text: str) -> WeightTable:
    D = None
    explicit = {}
    tail = None
    alpha = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "alpha":
                    alpha = Fraction(parts[1])
                continue
            if line.startswith("D:"):
                D = tuple(int(x) for x in line[2:].split())
                continue
            parts = line.split()
            if parts[0] == "a" and len(parts) == 3:
                l = int(parts[1])
                if l in explicit:
                    raise WeightFormatError(f"line {no}: duplicate weight for {l}")
                explicit[l] = Fraction(parts[2])
            elif parts[0] == "tail":
                if parts[1] == "pow2" and len(parts) == 4:
                    tail = ("pow2", int(parts[2]), Fraction(parts[3]))
                elif parts[1] == "halve" and len(parts) == 3:
                    tail = ("halve", int(parts[2]))
                elif parts[1] == "none" and len(parts) == 2:
                    tail = ("none",)
                else:
                    raise WeightFormatError(f"line {no}: bad tail rule")
            else:
                raise WeightFormatError(f"line {no}: unrecognised line {line!r}")
        except (ValueError, ZeroDivisionError, IndexError) as exc:
            if isinstance(exc, WeightFormatError):
                raise
            raise WeightFormatError(f"line {no}: {exc}") from exc
    if D is None:
        raise WeightFormatError("missing 'D:' header")
    if tail is None:
        raise WeightFormatError("missing 'tail' footer")
    try:
        return WeightTable(explicit, tail, D, alpha)
    except ValueError as exc:
        raise WeightFormatError(str(exc)) from exc


def read_weight_table(src) -> WeightTable:
    if hasattr(src, "read"):
        return parse_weight_table(src.read())
    if isinstance(src, str) and "\n" in src:
        return parse_weight_table(src)
    with open(src) as fh:
        return parse_weight_table(fh.read())


DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def bundled_table(name: str) -> WeightTable:
    """Load a weight table shipped with the package ("one_third", "two_sevenths")."""
    return read_weight_table(os.path.join(DATA_DIR, f"{name}.txt"))
