"""Sparse truncated power series on the doubled jet variable set.

Variables come in two sectors (holomorphic ``t`` and antiholomorphic ``tb``),
levels ``0..n_max`` and flavors ``1..N``.  A :class:`SeriesRing` fixes those
bounds plus a total-degree cap ``d_max`` and the coefficient backend
(``rational`` for exact Q(i) arithmetic, ``float`` for complex doubles).

A :class:`TruncatedSeries` stores a sparse ``{monomial: coefficient}`` map
together with a knowledge window:

* ``exact=True`` means the stored terms are the complete expansion — nothing
  was ever discarded and every absent monomial is mathematically zero;
* otherwise ``valid_degree`` bounds the total degrees whose coefficients are
  trustworthy.  Degrees above the window are unknown, not zero.

Window bookkeeping follows the filtration calculus: addition takes the
minimum window, differentiation lowers it by one, and multiplication uses the
valuation-aware rule ``min(va + val(b), vb + val(a))`` so that factors with no
low-degree terms do not needlessly shrink the result's window.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .scalars import (
    ComplexRational,
    Scalar,
    ScalarLike,
    conjugate_scalar,
    format_rational,
    magnitude,
)

__all__ = ["SeriesRing", "TruncatedSeries", "Monomial"]

#: A monomial: ``((var_index, exponent), ...)`` sorted by variable index.
Monomial = Tuple[Tuple[int, int], ...]

_EMPTY: Monomial = ()

# Sentinel "infinite" degree used in window arithmetic for exact operands.
_INF = 1 << 30

HOL = 0
ANTIHOL = 1


def _mono_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Merge two sorted exponent lists, adding exponents of shared variables."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append((va, ea))
            i += 1
        else:
            out.append((vb, eb))
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _require_positive_int(name: str, value: int) -> None:
    if not isinstance(value, int) or value <= 0:
        raise ValueError(f"{name} must be a positive int, got {value!r}")


def _require_non_negative_int(name: str, value: int) -> None:
    if not isinstance(value, int) or value < 0:
        raise ValueError(f"{name} must be a non-negative int, got {value!r}")


class SeriesRing:
    """Fixed truncation context: variable ranges, degree cap, backend.

    Parameters
    ----------
    num_flavors:
        Number of primary directions ``N`` (flavors are 1-based).
    n_max:
        Highest jet level; levels run ``0..n_max`` in both sectors.
    d_max:
        Total-degree cap for every series in the ring.
    mode:
        ``"rational"`` (exact, default) or ``"float"``.
    """

    def __init__(self, num_flavors: int, n_max: int, d_max: int, mode: str = "rational"):
        _require_positive_int("num_flavors", num_flavors)
        _require_non_negative_int("n_max", n_max)
        _require_positive_int("d_max", d_max)
        if mode not in ("rational", "float"):
            raise ValueError(f"mode must be 'rational' or 'float', got {mode!r}")
        self.num_flavors = num_flavors
        self.n_max = n_max
        self.d_max = d_max
        self.mode = mode
        self._levels = n_max + 1
        self.num_vars = 2 * self._levels * num_flavors

    # ------------------------------------------------------------------
    # variable indexing
    # ------------------------------------------------------------------

    def var_index(self, sector: int, level: int, flavor: int) -> int:
        """Flat index of the variable ``t^flavor_level`` in the given sector."""
        if sector not in (HOL, ANTIHOL):
            raise ValueError(f"sector must be 0 (hol) or 1 (antihol), got {sector!r}")
        if not 0 <= level <= self.n_max:
            raise ValueError(f"level must lie in 0..{self.n_max}, got {level!r}")
        if not 1 <= flavor <= self.num_flavors:
            raise ValueError(f"flavor must lie in 1..{self.num_flavors}, got {flavor!r}")
        return (sector * self._levels + level) * self.num_flavors + (flavor - 1)

    def var_info(self, index: int) -> Tuple[int, int, int]:
        """Inverse of :meth:`var_index`: returns ``(sector, level, flavor)``."""
        if not 0 <= index < self.num_vars:
            raise ValueError(f"variable index out of range: {index}")
        flavor = index % self.num_flavors + 1
        rest = index // self.num_flavors
        return rest // self._levels, rest % self._levels, flavor

    def flip_sector(self, index: int) -> int:
        sector, level, flavor = self.var_info(index)
        return self.var_index(1 - sector, level, flavor)

    def var_name(self, index: int) -> str:
        sector, level, flavor = self.var_info(index)
        stem = "t" if sector == HOL else "tb"
        return f"{stem}({level},{flavor})"

    # ------------------------------------------------------------------
    # scalar coercion
    # ------------------------------------------------------------------

    def scalar(self, value: ScalarLike) -> Scalar:
        """Coerce a number-like value into this ring's coefficient type."""
        if self.mode == "rational":
            if isinstance(value, (float, complex)):
                raise TypeError("float values are not allowed in rational mode")
            return ComplexRational.from_value(value)
        if isinstance(value, ComplexRational):
            return complex(value)
        if isinstance(value, str):
            return complex(float(Fraction(value)), 0.0)
        return complex(value)

    def scalar_is_zero(self, value: Scalar) -> bool:
        if isinstance(value, ComplexRational):
            return value.is_zero()
        return value == 0

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    def series(
        self,
        terms: Mapping[Monomial, ScalarLike],
        *,
        exact: bool = True,
        valid_degree: Optional[int] = None,
    ) -> "TruncatedSeries":
        """Build a series from ``{monomial: coefficient}`` with validation."""
        clean = {}
        for mono, coeff in terms.items():
            mono = tuple(sorted((int(v), int(e)) for v, e in mono))
            for v, e in mono:
                self.var_info(v)  # range check
                if e <= 0:
                    raise ValueError(f"exponent must be positive in monomial {mono!r}")
            if len({v for v, _ in mono}) != len(mono):
                raise ValueError(f"repeated variable in monomial {mono!r}")
            clean[mono] = self.scalar(coeff)
        return TruncatedSeries._make(self, clean, exact, valid_degree)

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries._make(self, {}, True, None)

    def one(self) -> "TruncatedSeries":
        return self.const(1)

    def const(self, value: ScalarLike) -> "TruncatedSeries":
        c = self.scalar(value)
        terms = {} if self.scalar_is_zero(c) else {_EMPTY: c}
        return TruncatedSeries._make(self, terms, True, None)

    def var(self, sector: int, level: int, flavor: int) -> "TruncatedSeries":
        idx = self.var_index(sector, level, flavor)
        return TruncatedSeries._make(self, {((idx, 1),): self.scalar(1)}, True, None)

    def small_var(self, flavor: int) -> "TruncatedSeries":
        """The level-0 holomorphic coordinate ``t^flavor_0``."""
        return self.var(HOL, 0, flavor)

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def term_sort_key(self, mono: Monomial):
        """Graded lexicographic key: ascending total degree, then lex on the
        dense exponent vector in variable order (hol sector first,
        level-major), higher powers of earlier variables first."""
        dense = [0] * self.num_vars
        for v, e in mono:
            dense[v] = -e
        return (_mono_degree(mono), tuple(dense))

    def parse_terms(
        self,
        payload: Sequence[Mapping],
        *,
        exact: bool = True,
        valid_degree: Optional[int] = None,
    ) -> "TruncatedSeries":
        """Inverse of :meth:`TruncatedSeries.serialize_terms`."""
        terms = {}
        for entry in payload:
            mono = tuple(
                (self.var_index(int(s), int(lv), int(fl)), int(e))
                for s, lv, fl, e in entry["mono"]
            )
            coeff = ComplexRational(Fraction(entry["re"]), Fraction(entry["im"]))
            terms[mono] = coeff
        return self.series(terms, exact=exact, valid_degree=valid_degree)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesRing):
            return NotImplemented
        return (
            self.num_flavors == other.num_flavors
            and self.n_max == other.n_max
            and self.d_max == other.d_max
            and self.mode == other.mode
        )

    def __hash__(self) -> int:
        return hash((self.num_flavors, self.n_max, self.d_max, self.mode))

    def __repr__(self) -> str:
        return (
            f"SeriesRing(N={self.num_flavors}, n_max={self.n_max}, "
            f"d_max={self.d_max}, mode={self.mode!r})"
        )


class TruncatedSeries:
    """A sparse series in a :class:`SeriesRing` with window bookkeeping.

    Instances are immutable; every operation returns a new series.  Use the
    ring's constructors (``ring.series``, ``ring.var``, ``ring.const``) rather
    than instantiating directly.
    """

    __slots__ = ("ring", "terms", "exact", "_valid")

    def __init__(self, *args, **kwargs):
        raise TypeError("use SeriesRing constructors to build series")

    @classmethod
    def _make(
        cls,
        ring: SeriesRing,
        terms: dict,
        exact: bool,
        valid: Optional[int],
    ) -> "TruncatedSeries":
        """Normalize: drop zeros, clamp the window, demote on overflow."""
        self = object.__new__(cls)
        cap = ring.d_max
        if exact:
            kept = {}
            overflow = False
            for mono, coeff in terms.items():
                if ring.scalar_is_zero(coeff):
                    continue
                if _mono_degree(mono) > cap:
                    overflow = True
                    continue
                kept[mono] = coeff
            if overflow:
                exact = False
                valid = cap
            else:
                valid = cap
        else:
            if valid is None:
                valid = cap
            valid = min(valid, cap)
            if valid < 0:
                valid = 0
            kept = {
                mono: coeff
                for mono, coeff in terms.items()
                if not ring.scalar_is_zero(coeff) and _mono_degree(mono) <= valid
            }
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", kept)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "_valid", valid)
        return self

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TruncatedSeries is immutable")

    # ------------------------------------------------------------------
    # window helpers
    # ------------------------------------------------------------------

    @property
    def valid_degree(self) -> int:
        """Largest total degree whose coefficients are trustworthy (≤ d_max)."""
        return self._valid

    def _window(self) -> int:
        """Window as used in min-arithmetic: infinite for exact series."""
        return _INF if self.exact else self._valid

    def valuation(self) -> Optional[int]:
        """Minimal total degree with a nonzero coefficient; None if zero."""
        if not self.terms:
            return None
        return min(_mono_degree(m) for m in self.terms)

    @property
    def is_zero(self) -> bool:
        """True when no nonzero coefficient is stored (exact zero if `exact`)."""
        return not self.terms

    def max_abs(self) -> Union[Fraction, float]:
        """Largest coefficient magnitude inside the window (0 if none)."""
        if not self.terms:
            return Fraction(0) if self.ring.mode == "rational" else 0.0
        return max(magnitude(c) for c in self.terms.values())

    def _with_window(self, exact: bool, valid: Optional[int]) -> "TruncatedSeries":
        return TruncatedSeries._make(self.ring, dict(self.terms), exact, valid)

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def _check_ring(self, other: "TruncatedSeries") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise ValueError("series belong to different rings")

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            try:
                other = self.ring.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        self._check_ring(other)
        merged = dict(self.terms)
        for mono, coeff in other.terms.items():
            if mono in merged:
                merged[mono] = merged[mono] + coeff
            else:
                merged[mono] = coeff
        exact = self.exact and other.exact
        valid = None if exact else min(self._window(), other._window())
        return TruncatedSeries._make(self.ring, merged, exact, valid)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        terms = {m: -c for m, c in self.terms.items()}
        return TruncatedSeries._make(self.ring, terms, self.exact, self._valid)

    def __sub__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            try:
                other = self.ring.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def scale(self, value: ScalarLike) -> "TruncatedSeries":
        """Multiply by a scalar (window-preserving)."""
        c = self.ring.scalar(value)
        if self.ring.scalar_is_zero(c):
            return TruncatedSeries._make(self.ring, {}, self.exact, self._valid)
        terms = {m: coeff * c for m, coeff in self.terms.items()}
        return TruncatedSeries._make(self.ring, terms, self.exact, self._valid)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            try:
                return self.scale(other)
            except (TypeError, ValueError):
                return NotImplemented
        self._check_ring(other)
        ring = self.ring
        cap = ring.d_max
        if not self.terms or not other.terms:
            # 0 * x is exactly 0 regardless of either window.
            exact = (self.exact and not self.terms) or (other.exact and not other.terms)
            if exact:
                return ring.zero()
            return TruncatedSeries._make(
                ring, {}, False, min(self._window(), other._window())
            )
        val_a = min(_mono_degree(m) for m in self.terms)
        val_b = min(_mono_degree(m) for m in other.terms)
        window = min(self._window() + val_b, other._window() + val_a, _INF)
        both_exact = self.exact and other.exact
        limit = cap if both_exact else min(window, cap)
        out: dict = {}
        overflow = False
        a_items = [(m, _mono_degree(m), c) for m, c in self.terms.items()]
        b_items = [(m, _mono_degree(m), c) for m, c in other.terms.items()]
        b_items.sort(key=lambda t: t[1])
        for ma, da, ca in a_items:
            for mb, db, cb in b_items:
                if da + db > limit:
                    overflow = True
                    break
                mono = _mono_mul(ma, mb)
                prod = ca * cb
                if mono in out:
                    out[mono] = out[mono] + prod
                else:
                    out[mono] = prod
        if both_exact and not overflow:
            return TruncatedSeries._make(ring, out, True, None)
        return TruncatedSeries._make(ring, out, False, min(window, cap))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("series exponent must be a non-negative int")
        result = self.ring.one()
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __truediv__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = self.ring.scalar(other)
            one = self.ring.scalar(1)
            return self.scale(one / c)
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------

    def partial_derivative(self, sector: int, level: int, flavor: int) -> "TruncatedSeries":
        """Partial derivative with respect to one jet variable.

        Exactness survives; an inexact window drops by one (floor 0) because
        degree-``k`` knowledge of the input only determines degree ``k-1``
        coefficients of the derivative.
        """
        idx = self.ring.var_index(sector, level, flavor)
        out: dict = {}
        for mono, coeff in self.terms.items():
            for pos, (v, e) in enumerate(mono):
                if v == idx:
                    if e == 1:
                        new_mono = mono[:pos] + mono[pos + 1 :]
                    else:
                        new_mono = mono[:pos] + ((v, e - 1),) + mono[pos + 1 :]
                    out[new_mono] = coeff * e
                    break
        if self.exact:
            return TruncatedSeries._make(self.ring, out, True, None)
        return TruncatedSeries._make(self.ring, out, False, self._valid - 1)

    def conjugate(self) -> "TruncatedSeries":
        """Swap sectors on every variable and conjugate every coefficient."""
        ring = self.ring
        out: dict = {}
        for mono, coeff in self.terms.items():
            flipped = tuple(sorted((ring.flip_sector(v), e) for v, e in mono))
            out[flipped] = conjugate_scalar(coeff)
        return TruncatedSeries._make(ring, out, self.exact, self._valid)

    def substitute(
        self,
        images: Mapping[int, "TruncatedSeries"],
        *,
        allow_constant_term: bool = False,
    ) -> "TruncatedSeries":
        """Substitute series for variables (by flat index).

        Unmapped variables are left alone.  Every image must have zero
        constant term unless ``allow_constant_term`` is set, and that override
        additionally requires the subject to be exact — otherwise unknown
        high-degree terms would contaminate every output degree.
        """
        ring = self.ring
        used = set()
        for mono in self.terms:
            for v, _ in mono:
                if v in images:
                    used.add(v)
        for v in used:
            img = images[v]
            self._check_ring(img)
            if _EMPTY in img.terms and not ring.scalar_is_zero(img.terms[_EMPTY]):
                if not allow_constant_term:
                    raise ValueError(
                        f"substitution image for {ring.var_name(v)} has a nonzero "
                        "constant term; pass allow_constant_term=True to accept"
                    )
                if not self.exact:
                    raise ValueError(
                        "constant-term substitution requires an exact subject series"
                    )
        power_cache: dict = {}

        def img_power(v: int, e: int) -> "TruncatedSeries":
            key = (v, e)
            if key in power_cache:
                return power_cache[key]
            if e == 1:
                result = images[v]
            else:
                result = img_power(v, e - 1) * images[v]
            power_cache[key] = result
            return result

        acc = ring.zero()
        for mono, coeff in self.terms.items():
            term = ring.const(coeff)
            for v, e in mono:
                if v in images:
                    term = term * img_power(v, e)
                else:
                    term = term * (ring.var(*ring.var_info(v)) ** e)
            acc = acc + term
        if not self.exact:
            # The subject's unknown terms (valuation > valid) map to series of
            # valuation > valid as well (images have zero constant term here).
            acc = acc._with_window(False, min(acc._window(), self._valid))
        return acc

    def restrict_small(self) -> "TruncatedSeries":
        """Set every level ≥ 1 variable (both sectors) to zero."""
        ring = self.ring
        out: dict = {}
        for mono, coeff in self.terms.items():
            if all(ring.var_info(v)[1] == 0 for v, _ in mono):
                out[mono] = coeff
        return TruncatedSeries._make(ring, out, self.exact, self._valid)

    # ------------------------------------------------------------------
    # inverse and square root
    # ------------------------------------------------------------------

    def constant_term(self) -> Scalar:
        return self.terms.get(_EMPTY, self.ring.scalar(0))

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        ring = self.ring
        c0 = self.constant_term()
        if ring.scalar_is_zero(c0):
            raise ValueError("series with zero constant term has no inverse")
        one = ring.scalar(1)
        if len(self.terms) <= 1:
            result = ring.const(one / c0)
            if self.exact:
                return result
            return result._with_window(False, self._valid)
        window = ring.d_max if self.exact else self._valid
        # 1/b = (1/c0) * sum_k x^k  with  x = 1 - b/c0 (valuation >= 1).
        x = ring.one() - self.scale(one / c0)
        acc = ring.one()
        power = ring.one()
        for _ in range(window):
            power = power * x
            if power.is_zero:
                break
            acc = acc + power
        acc = acc.scale(one / c0)
        return acc._with_window(False, window)

    def sqrt_unit(self) -> "TruncatedSeries":
        """Square root of a series with constant term exactly 1.

        Solved degree by degree: ``s_d = (a_d - (s^2)_d) / 2`` where ``s`` is
        the partial sum through degree ``d-1``.
        """
        ring = self.ring
        c0 = self.constant_term()
        if not (isinstance(c0, ComplexRational) and c0 == ComplexRational.ONE) and c0 != 1:
            raise ValueError("sqrt_unit requires constant term exactly 1")
        window = ring.d_max if self.exact else self._valid
        half = ring.scalar(1) / ring.scalar(2)
        s_terms: dict = {_EMPTY: ring.scalar(1)}
        for d in range(1, window + 1):
            s = TruncatedSeries._make(ring, dict(s_terms), False, window)
            square = s * s
            for mono, coeff in self.terms.items():
                if _mono_degree(mono) != d:
                    continue
                delta = (coeff - square.terms.get(mono, ring.scalar(0))) * half
                if not ring.scalar_is_zero(delta):
                    s_terms[mono] = delta
            for mono, coeff in square.terms.items():
                if _mono_degree(mono) == d and mono not in self.terms:
                    delta = -coeff * half
                    if not ring.scalar_is_zero(delta):
                        s_terms[mono] = delta
        if len(self.terms) == 1:  # the series was exactly 1
            return ring.one()
        return TruncatedSeries._make(ring, s_terms, False, window)

    # ------------------------------------------------------------------
    # structure access
    # ------------------------------------------------------------------

    def homogeneous_part(self, degree: int) -> "TruncatedSeries":
        """The total-degree-``degree`` component as an exact polynomial."""
        if degree > self._window() and not self.exact:
            raise ValueError(
                f"degree {degree} lies outside the trusted window {self._valid}"
            )
        out = {m: c for m, c in self.terms.items() if _mono_degree(m) == degree}
        return TruncatedSeries._make(self.ring, out, True, None)

    def coefficient(self, mono_spec: Iterable[Tuple[int, int, int, int]]) -> Scalar:
        """Coefficient of a monomial given as ``(sector, level, flavor, exp)``
        factors; raises if the monomial lies outside the trusted window."""
        mono = tuple(
            sorted((self.ring.var_index(s, lv, fl), int(e)) for s, lv, fl, e in mono_spec)
        )
        if not self.exact and _mono_degree(mono) > self._valid:
            raise ValueError("monomial lies outside the trusted window")
        return self.terms.get(mono, self.ring.scalar(0))

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "TruncatedSeries":
        terms = {m: fn(c) for m, c in self.terms.items()}
        return TruncatedSeries._make(self.ring, terms, self.exact, self._valid)

    def factorial_rescale(self) -> "TruncatedSeries":
        """Relabel to level-factorial coordinates: coefficient of a monomial is
        scaled by ``prod(level!^exp)`` over its variables (display helper)."""
        ring = self.ring
        out = {}
        for mono, coeff in self.terms.items():
            factor = 1
            for v, e in mono:
                level = ring.var_info(v)[1]
                if level >= 2:
                    factor *= factorial(level) ** e
            out[mono] = coeff * factor if factor != 1 else coeff
        return TruncatedSeries._make(ring, out, self.exact, self._valid)

    # ------------------------------------------------------------------
    # serialization and display
    # ------------------------------------------------------------------

    def serialize_terms(self) -> list:
        """Canonical JSON-ready term list, graded-lex sorted.

        Each term is ``{"re": "p/q", "im": "p/q", "mono": [[sector, level,
        flavor, exp], ...]}`` with the monomial factors in variable order.
        Float mode emits ``repr(float)`` strings instead of rationals.
        """
        ring = self.ring
        out = []
        for mono in sorted(self.terms, key=ring.term_sort_key):
            coeff = self.terms[mono]
            if isinstance(coeff, ComplexRational):
                re_s, im_s = format_rational(coeff.re), format_rational(coeff.im)
            else:
                re_s, im_s = repr(coeff.real), repr(coeff.imag)
            out.append(
                {
                    "re": re_s,
                    "im": im_s,
                    "mono": [list(ring.var_info(v)) + [e] for v, e in mono],
                }
            )
        return out

    def __str__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            ring = self.ring
            parts = []
            for mono in sorted(self.terms, key=ring.term_sort_key):
                coeff = self.terms[mono]
                factors = [
                    f"{ring.var_name(v)}" + (f"^{e}" if e > 1 else "")
                    for v, e in mono
                ]
                stem = "*".join(factors) if factors else "1"
                parts.append(f"({coeff})*{stem}")
            body = " + ".join(parts)
        tag = "exact" if self.exact else f"valid<={self._valid}"
        return f"{body} [{tag}]"

    __repr__ = __str__
