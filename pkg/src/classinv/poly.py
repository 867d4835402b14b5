"""Sparse multivariate polynomials over Q with copy-indexed variables.

The variable universe is fixed by a signature (n, k, m): coordinates live
in k covector copies and m vector copies of an n-dimensional space, for
N = n*(k+m) variables total.  The canonical variable order puts covector
copies before vector copies, copies in index order, coordinates within a
copy in index order; a monomial is a dense exponent tuple of length N in
that order.  Term maps carry no zero coefficients, so polynomial equality
is dict equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .exact import Matrix, ZERO, ONE, _as_fraction

Monomial = tuple  # dense exponent tuple, length = signature.num_vars

DEFAULT_DIM_CAP = 200_000


class VarKind(Enum):
    COVECTOR = "u"
    VECTOR = "x"


class SignatureMismatch(ValueError):
    pass


class MissingAssignment(ValueError):
    pass


class DegreeCapExceeded(ValueError):
    def __init__(self, dim: int, cap: int):
        self.dim = dim
        self.cap = cap
        super().__init__(f"graded piece has dimension {dim}, above the cap {cap}")


@dataclass(frozen=True)
class SpaceSignature:
    """Dimensions of the variable universe: n = dim V, k covector copies, m vector copies."""

    n: int
    k: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 0 or self.m < 0:
            raise ValueError("copy counts must be nonnegative")
        if self.k + self.m < 1:
            raise ValueError("need at least one copy")

    @property
    def num_vars(self) -> int:
        return self.n * (self.k + self.m)

    @property
    def num_copies(self) -> int:
        return self.k + self.m

    def var_index(self, kind: VarKind, copy: int, coord: int) -> int:
        """Global index of a variable; copy and coord are 1-based."""
        if kind is VarKind.COVECTOR:
            if not 1 <= copy <= self.k:
                raise ValueError(f"covector copy {copy} out of range 1..{self.k}")
            base = (copy - 1) * self.n
        else:
            if not 1 <= copy <= self.m:
                raise ValueError(f"vector copy {copy} out of range 1..{self.m}")
            base = (self.k + copy - 1) * self.n
        if not 1 <= coord <= self.n:
            raise ValueError(f"coordinate {coord} out of range 1..{self.n}")
        return base + coord - 1

    def var_id(self, index: int) -> tuple[VarKind, int, int]:
        """Inverse of var_index: (kind, copy, coord), 1-based."""
        if not 0 <= index < self.num_vars:
            raise ValueError(f"variable index {index} out of range")
        copy0, coord0 = divmod(index, self.n)
        if copy0 < self.k:
            return VarKind.COVECTOR, copy0 + 1, coord0 + 1
        return VarKind.VECTOR, copy0 - self.k + 1, coord0 + 1

    def var_name(self, index: int) -> str:
        kind, copy, coord = self.var_id(index)
        return f"{kind.value}[{copy},{coord}]"

    def copy_slot(self, index: int) -> int:
        """0-based copy slot (covector copies first) owning a variable index."""
        return index // self.n

    def copy_degrees(self, mono: Monomial) -> tuple:
        """Per-copy total degrees of a monomial, covector copies first."""
        n = self.n
        return tuple(
            sum(mono[c * n : (c + 1) * n]) for c in range(self.num_copies)
        )


def space_dimension(sig: SpaceSignature, d: int) -> int:
    """dim of the homogeneous degree-d piece: C(N+d-1, d)."""
    return comb(sig.num_vars + d - 1, d)


def check_dim_cap(sig: SpaceSignature, d: int, cap: int = DEFAULT_DIM_CAP) -> None:
    dim = space_dimension(sig, d)
    if dim > cap:
        raise DegreeCapExceeded(dim, cap)


def _exponents_desc(nvars: int, total: int):
    """All exponent tuples of the given total degree, lexicographically descending."""
    if nvars == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _exponents_desc(nvars - 1, total - first):
            yield (first,) + rest


def monomial_basis(
    sig: SpaceSignature, d: int, cap: int = DEFAULT_DIM_CAP
) -> list[Monomial]:
    """All degree-d monomials in graded-lex order (leading monomial first)."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    check_dim_cap(sig, d, cap)
    return list(_exponents_desc(sig.num_vars, d))


def grlex_key(mono: Monomial) -> tuple:
    """Sort key: graded first, lex inside a degree; use reverse=True for leading-first."""
    return (sum(mono), mono)


class Polynomial:
    """Element of the polynomial ring over the signature's variables."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: SpaceSignature, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff:
                    clean[tuple(mono)] = coeff
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, sig: SpaceSignature) -> "Polynomial":
        return cls(sig, {})

    @classmethod
    def constant(cls, sig: SpaceSignature, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return cls.zero(sig)
        return cls(sig, {(0,) * sig.num_vars: c})

    @classmethod
    def variable(cls, sig: SpaceSignature, kind: VarKind, copy: int, coord: int) -> "Polynomial":
        idx = sig.var_index(kind, copy, coord)
        mono = tuple(1 if i == idx else 0 for i in range(sig.num_vars))
        return cls(sig, {mono: ONE})

    @classmethod
    def from_var_index(cls, sig: SpaceSignature, index: int) -> "Polynomial":
        mono = tuple(1 if i == index else 0 for i in range(sig.num_vars))
        return cls(sig, {mono: ONE})

    # -- ring structure --------------------------------------------------

    def _need_same_sig(self, other: "Polynomial") -> None:
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._need_same_sig(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, ZERO) + coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial(self.sig, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._need_same_sig(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, ZERO) - coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial(self.sig, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.sig, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._need_same_sig(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, ZERO) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Polynomial(self.sig, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.sig, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.sig)
        return Polynomial(self.sig, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- grading ---------------------------------------------------------

    def degree(self) -> int | None:
        """Total degree; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        """Split into degree pieces; keys are exactly the degrees present."""
        buckets: dict[int, dict] = {}
        for mono, coeff in self.terms.items():
            buckets.setdefault(sum(mono), {})[mono] = coeff
        return {d: Polynomial(self.sig, t) for d, t in sorted(buckets.items())}

    def copy_degrees(self) -> tuple | None:
        """Shared per-copy multidegree, or None if mixed or zero."""
        seen = {self.sig.copy_degrees(m) for m in self.terms}
        if len(seen) == 1:
            return seen.pop()
        return None

    # -- evaluation and substitution ------------------------------------

    def evaluate(self, values) -> Fraction:
        """Exact value at a point.

        ``values`` is either a sequence of length num_vars or a mapping
        from variable index to value covering every variable that occurs.
        """
        sig = self.sig
        if isinstance(values, Mapping):
            lookup = values
        else:
            values = list(values)
            if len(values) != sig.num_vars:
                raise MissingAssignment(
                    f"point has {len(values)} coordinates, need {sig.num_vars}"
                )
            lookup = dict(enumerate(values))
        total = ZERO
        for mono, coeff in self.terms.items():
            term = coeff
            for idx, e in enumerate(mono):
                if e:
                    if idx not in lookup:
                        raise MissingAssignment(f"no value for {sig.var_name(idx)}")
                    term *= _as_fraction(lookup[idx]) ** e
            total += term
        return total

    def substitute_linear(
        self, assign: Mapping[tuple[VarKind, int], Matrix]
    ) -> "Polynomial":
        """Replace each copy's coordinates by the given linear combinations.

        The matrix M assigned to a copy rewrites that copy's coordinate a
        as sum_b M[a,b] * coordinate b; copies without an assignment keep
        the identity.  The result is f composed with the block-diagonal
        linear map, expanded and collected exactly.
        """
        sig = self.sig
        n = sig.n
        forms: list[list[tuple[int, Fraction]] | None] = [None] * sig.num_vars
        for (kind, copy), mat in assign.items():
            if mat.rows != n or mat.cols != n:
                raise SignatureMismatch(
                    f"matrix for copy ({kind.value},{copy}) is {mat.rows}x{mat.cols}, need {n}x{n}"
                )
            base = sig.var_index(kind, copy, 1)
            for a in range(n):
                form = [
                    (base + b, mat.at(a, b)) for b in range(n) if mat.at(a, b)
                ]
                forms[base + a] = form
        out: dict = {}
        nvars = sig.num_vars
        zero_mono = (0,) * nvars
        for mono, coeff in self.terms.items():
            acc = {zero_mono: coeff}
            for idx, e in enumerate(mono):
                if not e:
                    continue
                form = forms[idx]
                if form is None:
                    acc = {
                        tuple(
                            x + (e if i == idx else 0) for i, x in enumerate(m)
                        ): c
                        for m, c in acc.items()
                    }
                    continue
                for _ in range(e):
                    nxt: dict = {}
                    for m, c in acc.items():
                        for vidx, fc in form:
                            key = list(m)
                            key[vidx] += 1
                            key = tuple(key)
                            s = nxt.get(key, ZERO) + c * fc
                            if s:
                                nxt[key] = s
                            else:
                                nxt.pop(key, None)
                    acc = nxt
                    if not acc:
                        break
                if not acc:
                    break
            for m, c in acc.items():
                s = out.get(m, ZERO) + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(sig, out)

    # -- presentation ----------------------------------------------------

    def terms_sorted(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order, leading term first."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_monomial(self) -> Monomial | None:
        if not self.terms:
            return None
        return max(self.terms, key=grlex_key)

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for mono, coeff in self.terms_sorted():
            vars_part = "*".join(
                f"{self.sig.var_name(i)}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(mono)
                if e
            )
            if vars_part:
                parts.append(f"{coeff}*{vars_part}" if coeff != 1 else vars_part)
            else:
                parts.append(str(coeff))
        return "Polynomial(" + " + ".join(parts) + ")"
