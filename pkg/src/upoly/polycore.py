"""Exact sparse polynomial ring over the integers in x_1, x_2, ..., y and z.

Terms are keyed by :class:`UMonomial`: an integer partition carrying the
x-variable indices, plus exponents for z and y.  Coefficients are Python
integers, so all arithmetic is exact at any magnitude.  Values are immutable
after construction and every operation is a pure function.

The total order on monomials compares ``(zexp, yexp, len(xpart), xpart)``.
Serialisation lists terms in ascending order of that key; division cancels
the maximal ("leading") term, which is well defined because the key respects
products and the constant monomial is minimal.
"""

from __future__ import annotations

import re
from types import MappingProxyType
from typing import Iterable, Iterator, NamedTuple

from . import kernels
from .errors import MalformedPolynomial, PolyParseError

__all__ = [
    "Partition",
    "UMonomial",
    "UPolynomial",
    "make_partition",
    "partition_union",
    "ring_combine",
    "star_specialize",
    "exact_divide",
    "truncate_length",
    "restrict_part_size",
    "poly_to_text",
    "poly_from_text",
    "poly_to_json_dict",
    "poly_from_json_dict",
    "x_var",
    "y_var",
    "z_var",
    "const",
]

# A partition: non-increasing tuple of positive integers.  The empty tuple is
# the constant-1 x-factor.
Partition = tuple[int, ...]


def make_partition(parts: Iterable[int]) -> Partition:
    """Normalise to a valid partition; raises ValueError on bad parts."""
    out = tuple(sorted(parts, reverse=True))
    for p in out:
        if not isinstance(p, int) or p < 1:
            raise ValueError(f"partition parts must be positive integers, got {p!r}")
    return out


def partition_union(a: Partition, b: Partition) -> Partition:
    """Multiset union of two partitions, re-sorted non-increasing."""
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


class UMonomial(NamedTuple):
    """One term's exponent data: x-partition, z-exponent, y-exponent."""

    xpart: Partition
    zexp: int = 0
    yexp: int = 0

    def sort_key(self) -> tuple[int, int, int, Partition]:
        return (self.zexp, self.yexp, len(self.xpart), self.xpart)

    def mul(self, other: "UMonomial") -> "UMonomial":
        return UMonomial(
            partition_union(self.xpart, other.xpart),
            self.zexp + other.zexp,
            self.yexp + other.yexp,
        )

    def divide(self, other: "UMonomial") -> "UMonomial | None":
        """Quotient monomial, or None when ``other`` does not divide self."""
        z = self.zexp - other.zexp
        y = self.yexp - other.yexp
        if z < 0 or y < 0:
            return None
        rest = _multiset_difference(self.xpart, other.xpart)
        if rest is None:
            return None
        return UMonomial(rest, z, y)


_ONE = UMonomial((), 0, 0)


def _multiset_difference(a: Partition, b: Partition) -> Partition | None:
    """a minus b as multisets (both non-increasing); None if b is not contained."""
    if not b:
        return a
    if len(b) > len(a):
        return None
    out: list[int] = []
    j = 0
    nb = len(b)
    for p in a:
        if j < nb and b[j] == p:
            j += 1
        elif j < nb and b[j] > p:
            return None
        else:
            out.append(p)
    if j < nb:
        return None
    return tuple(out)


class UPolynomial:
    """Sparse integer-coefficient polynomial keyed by :class:`UMonomial`.

    Zero coefficients are never stored; the zero polynomial has an empty term
    map.  Equality is exact term-map equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[UMonomial, int] | None = None):
        clean: dict[UMonomial, int] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(coeff, int):
                    raise TypeError(f"coefficient must be int, got {type(coeff).__name__}")
                if coeff == 0:
                    continue
                if not isinstance(mono, UMonomial):
                    mono = UMonomial(make_partition(mono[0]), int(mono[1]), int(mono[2]))
                else:
                    _validate_monomial(mono)
                clean[mono] = clean.get(mono, 0) + coeff
                if clean[mono] == 0:
                    del clean[mono]
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[UMonomial, int]) -> "UPolynomial":
        """Wrap an already-normalised term dict without validation."""
        self = object.__new__(cls)
        self._terms = terms
        return self

    @classmethod
    def zero(cls) -> "UPolynomial":
        return cls._raw({})

    @classmethod
    def one(cls) -> "UPolynomial":
        return cls._raw({_ONE: 1})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[int, Iterable[int], int, int]]) -> "UPolynomial":
        """Build from ``(coeff, parts, zexp, yexp)`` tuples."""
        acc: dict[UMonomial, int] = {}
        for coeff, parts, zexp, yexp in items:
            mono = UMonomial(make_partition(parts), zexp, yexp)
            _validate_monomial(mono)
            c = acc.get(mono, 0) + coeff
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
        return cls._raw(acc)

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coefficient(self, mono: UMonomial) -> int:
        return self._terms.get(mono, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UPolynomial):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({} if other == 0 else {_ONE: other})
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __neg__(self) -> "UPolynomial":
        return UPolynomial._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other: "UPolynomial | int") -> "UPolynomial":
        other = _coerce(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            c = out.get(mono, 0) + coeff
            if c:
                out[mono] = c
            else:
                del out[mono]
        return UPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other: "UPolynomial | int") -> "UPolynomial":
        other = _coerce(other)
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            c = out.get(mono, 0) - coeff
            if c:
                out[mono] = c
            else:
                del out[mono]
        return UPolynomial._raw(out)

    def __rsub__(self, other: "UPolynomial | int") -> "UPolynomial":
        return _coerce(other).__sub__(self)

    def __mul__(self, other: "UPolynomial | int") -> "UPolynomial":
        if isinstance(other, int):
            if other == 0:
                return UPolynomial.zero()
            return UPolynomial._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, UPolynomial):
            return NotImplemented
        return UPolynomial._raw(kernels.mul_terms(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UPolynomial":
        if exponent < 0:
            raise ValueError("negative powers are not defined")
        result = UPolynomial.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def sorted_terms(self) -> list[tuple[UMonomial, int]]:
        """Terms in canonical serialisation order."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def leading_term(self) -> tuple[UMonomial, int]:
        """The maximal term under the monomial order; errors on zero."""
        if not self._terms:
            raise MalformedPolynomial("the zero polynomial has no leading term")
        mono = max(self._terms, key=UMonomial.sort_key)
        return mono, self._terms[mono]

    def max_part(self) -> int:
        """Largest x-variable index present (0 for none)."""
        best = 0
        for mono in self._terms:
            if mono.xpart and mono.xpart[0] > best:
                best = mono.xpart[0]
        return best

    def min_xlength(self) -> int | None:
        """Shortest x-partition length over terms; None for the zero polynomial."""
        if not self._terms:
            return None
        return min(len(m.xpart) for m in self._terms)

    def xlength_component(self, length: int) -> "UPolynomial":
        """Sub-polynomial of the terms whose x-partition has the given length."""
        return UPolynomial._raw(
            {m: c for m, c in self._terms.items() if len(m.xpart) == length}
        )

    def __repr__(self) -> str:
        text = poly_to_text(self)
        if len(text) > 120:
            text = text[:117] + "..."
        return f"UPolynomial({text})"


def _validate_monomial(mono: UMonomial) -> None:
    parts, zexp, yexp = mono
    if zexp < 0 or yexp < 0:
        raise ValueError(f"negative exponent in {mono}")
    last = None
    for p in parts:
        if not isinstance(p, int) or p < 1:
            raise ValueError(f"bad partition part {p!r}")
        if last is not None and p > last:
            raise ValueError(f"partition {parts} is not non-increasing")
        last = p


def _coerce(value: "UPolynomial | int") -> UPolynomial:
    if isinstance(value, UPolynomial):
        return value
    if isinstance(value, int):
        return UPolynomial.zero() if value == 0 else UPolynomial._raw({_ONE: value})
    raise TypeError(f"cannot treat {type(value).__name__} as a polynomial")


def x_var(index: int) -> UPolynomial:
    if index < 1:
        raise ValueError("x-variable indices start at 1")
    return UPolynomial._raw({UMonomial((index,), 0, 0): 1})


def y_var() -> UPolynomial:
    return UPolynomial._raw({UMonomial((), 0, 1): 1})


def z_var() -> UPolynomial:
    return UPolynomial._raw({UMonomial((), 1, 0): 1})


def const(value: int) -> UPolynomial:
    return _coerce(value)


def ring_combine(p: UPolynomial, q: UPolynomial, op: str) -> UPolynomial:
    """Exact ring arithmetic: op is one of "add", "sub", "mul"."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown ring operation {op!r}")


def star_specialize(p: UPolynomial) -> UPolynomial:
    """Substitute z**n -> x_n in every term; the result is z-free."""
    out: dict[UMonomial, int] = {}
    for mono, coeff in p.terms.items():
        if mono.zexp == 0:
            key = mono
        else:
            key = UMonomial(partition_union(mono.xpart, (mono.zexp,)), 0, mono.yexp)
        c = out.get(key, 0) + coeff
        if c:
            out[key] = c
        else:
            del out[key]
    return UPolynomial._raw(out)


def exact_divide(p: UPolynomial, q: UPolynomial) -> UPolynomial | None:
    """Return r with p == q * r exactly, or None when q does not divide p.

    Works by repeated cancellation of the leading term under the monomial
    order; a failed leading-term division or a surviving remainder means the
    quotient does not exist in the ring, and None is returned.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return UPolynomial.zero()
    qterms = q.terms
    if len(qterms) == 1:
        (qm, qc), = qterms.items()
        out: dict[UMonomial, int] = {}
        for mono, coeff in p.terms.items():
            quot = mono.divide(qm)
            if quot is None or coeff % qc:
                return None
            out[quot] = coeff // qc
        return UPolynomial._raw(out)

    lead_q, lead_qc = q.leading_term()
    qitems = list(qterms.items())
    rem = dict(p.terms)
    quotient: dict[UMonomial, int] = {}
    while rem:
        lead_r = max(rem, key=UMonomial.sort_key)
        factor = lead_r.divide(lead_q)
        if factor is None:
            return None
        coeff = rem[lead_r]
        if coeff % lead_qc:
            return None
        fc = coeff // lead_qc
        quotient[factor] = quotient.get(factor, 0) + fc
        for qm, qc in qitems:
            key = qm.mul(factor)
            c = rem.get(key, 0) - fc * qc
            if c:
                rem[key] = c
            else:
                rem.pop(key, None)
    return UPolynomial._raw(quotient)


def _require_xy_free(p: UPolynomial, what: str) -> None:
    for mono in p.terms:
        if mono.zexp or mono.yexp:
            raise MalformedPolynomial(f"{what} requires a polynomial without y or z terms")


def truncate_length(p: UPolynomial, k: int) -> UPolynomial:
    """Keep the terms whose x-partition length is at most k + 1."""
    if k < 0:
        raise ValueError("truncation level must be non-negative")
    _require_xy_free(p, "truncate_length")
    cutoff = k + 1
    return UPolynomial._raw(
        {m: c for m, c in p.terms.items() if len(m.xpart) <= cutoff}
    )


def restrict_part_size(p: UPolynomial, k: int) -> UPolynomial:
    """Keep the terms whose every partition part is at most k."""
    if k < 1:
        raise ValueError("part-size bound must be positive")
    _require_xy_free(p, "restrict_part_size")
    return UPolynomial._raw(
        {m: c for m, c in p.terms.items() if not m.xpart or m.xpart[0] <= k}
    )


# ---------------------------------------------------------------------------
# codec: canonical text and JSON forms
# ---------------------------------------------------------------------------


def _monomial_factors(mono: UMonomial, xname: str) -> list[str]:
    factors: list[str] = []
    parts = mono.xpart
    i = len(parts) - 1
    while i >= 0:  # ascending variable index; parts are stored non-increasing
        p = parts[i]
        j = i
        while j >= 0 and parts[j] == p:
            j -= 1
        mult = i - j
        factors.append(f"{xname}{p}" if mult == 1 else f"{xname}{p}^{mult}")
        i = j
    if mono.yexp:
        factors.append("y" if mono.yexp == 1 else f"y^{mono.yexp}")
    if mono.zexp:
        factors.append("z" if mono.zexp == 1 else f"z^{mono.zexp}")
    return factors


def poly_to_text(p: UPolynomial, xname: str = "x") -> str:
    """Canonical text form, e.g. ``x1*z + z^2``; the zero polynomial is "0"."""
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for mono, coeff in p.sorted_terms():
        factors = _monomial_factors(mono, xname)
        mag = abs(coeff)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if not chunks:
            chunks.append(body if coeff > 0 else "-" + body)
        else:
            chunks.append((" + " if coeff > 0 else " - ") + body)
    return "".join(chunks)


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z]+\d*)|(\^)|(\*)|(\+)|(-))")


def poly_from_text(text: str, xname: str = "x") -> UPolynomial:
    """Parse the canonical text form; raises PolyParseError with a position."""
    s = text.strip()
    if s == "0":
        return UPolynomial.zero()
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == m.start():
            while pos < len(s) and s[pos].isspace():
                pos += 1
            raise PolyParseError(f"unexpected character {s[pos]!r}", pos)
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            tokens.append(("pow", "^", m.start(3)))
        elif m.group(4):
            tokens.append(("mul", "*", m.start(4)))
        elif m.group(5):
            tokens.append(("plus", "+", m.start(5)))
        else:
            tokens.append(("minus", "-", m.start(6)))
        pos = m.end()

    acc: dict[UMonomial, int] = {}
    i = 0
    n = len(tokens)

    def parse_factor(i: int) -> tuple[int, list[int], int, int, int]:
        """Returns (next_i, parts, zexp, yexp, coeff_factor)."""
        kind, value, tpos = tokens[i]
        if kind == "int":
            return i + 1, [], 0, 0, int(value)
        if kind != "name":
            raise PolyParseError(f"expected a factor, got {value!r}", tpos)
        exp = 1
        j = i + 1
        if j < n and tokens[j][0] == "pow":
            if j + 1 >= n or tokens[j + 1][0] != "int":
                raise PolyParseError("expected an integer exponent", tokens[j][2])
            exp = int(tokens[j + 1][1])
            j += 2
        if value == "y":
            return j, [], 0, exp, 1
        if value == "z":
            return j, [], exp, 0, 1
        if value.startswith(xname) and value[len(xname):].isdigit():
            idx = int(value[len(xname):])
            if idx < 1:
                raise PolyParseError(f"bad variable index in {value!r}", tpos)
            return j, [idx] * exp, 0, 0, 1
        raise PolyParseError(f"unknown variable {value!r}", tpos)

    sign = 1
    if i < n and tokens[i][0] in ("plus", "minus"):
        sign = -1 if tokens[i][0] == "minus" else 1
        i += 1
    while True:
        if i >= n:
            raise PolyParseError("expected a term", len(s))
        coeff = sign
        parts: list[int] = []
        zexp = yexp = 0
        while True:
            i, fp, fz, fy, fc = parse_factor(i)
            parts.extend(fp)
            zexp += fz
            yexp += fy
            coeff *= fc
            if i < n and tokens[i][0] == "mul":
                i += 1
                continue
            break
        mono = UMonomial(make_partition(parts), zexp, yexp)
        c = acc.get(mono, 0) + coeff
        if c:
            acc[mono] = c
        else:
            acc.pop(mono, None)
        if i >= n:
            break
        kind, value, tpos = tokens[i]
        if kind not in ("plus", "minus"):
            raise PolyParseError(f"expected '+' or '-', got {value!r}", tpos)
        sign = -1 if kind == "minus" else 1
        i += 1
    return UPolynomial._raw(acc)


def poly_to_json_dict(p: UPolynomial) -> dict:
    """JSON form: {"terms": [{"c": str, "y": int, "z": int, "parts": [...]}, ...]}."""
    return {
        "terms": [
            {"c": str(coeff), "y": mono.yexp, "z": mono.zexp, "parts": list(mono.xpart)}
            for mono, coeff in p.sorted_terms()
        ]
    }


def poly_from_json_dict(data: dict) -> UPolynomial:
    if not isinstance(data, dict) or "terms" not in data:
        raise PolyParseError("polynomial JSON must be an object with a 'terms' list")
    acc: dict[UMonomial, int] = {}
    terms = data["terms"]
    if not isinstance(terms, list):
        raise PolyParseError("'terms' must be a list")
    for i, entry in enumerate(terms):
        try:
            coeff = int(entry["c"])
            mono = UMonomial(
                make_partition(entry.get("parts", [])),
                int(entry.get("z", 0)),
                int(entry.get("y", 0)),
            )
            _validate_monomial(mono)
        except (KeyError, TypeError, ValueError) as exc:
            raise PolyParseError(f"bad term #{i}: {exc}", i) from exc
        c = acc.get(mono, 0) + coeff
        if c:
            acc[mono] = c
        else:
            acc.pop(mono, None)
    return UPolynomial._raw(acc)


def iter_random_polynomials(rng, count: int, max_terms: int = 20) -> Iterator[UPolynomial]:
    """Seeded stream of small random polynomials (test support)."""
    for _ in range(count):
        terms: dict[UMonomial, int] = {}
        for _ in range(rng.randrange(max_terms + 1)):
            parts = make_partition(rng.randrange(1, 5) for _ in range(rng.randrange(4)))
            mono = UMonomial(parts, rng.randrange(3), rng.randrange(2))
            coeff = rng.randrange(-9, 10)
            c = terms.get(mono, 0) + coeff
            if c:
                terms[mono] = c
            else:
                terms.pop(mono, None)
        yield UPolynomial._raw(terms)
