"""Jet-space (descendant) phase space: the u-map, frames, and correlators.

The truncated jet chart carries variables ``t(n, alpha)`` / ``tb(n, alpha)``
for levels ``0..n_max``.  This module constructs:

* the distinguished function vector ``u_alpha`` solving the fixed-point
  equation

  ``u_alpha = eta_{alpha gamma} t(0, gamma)
  + sum_{i < n_max} sum_beta t(i+1, beta) * R_{alpha, beta, i}(u)``

  where ``R_{., ., i}`` are the gradient matrices of the deformed-flat
  ladder, evaluated on the lifted coordinates;
* the Jacobian ``M^sigma_alpha = d u^sigma / d t(0, alpha)``, restricting to
  the identity on the primary chart;
* the level-raising operator ``T`` in closed form, and the triangular frame
  ``T^n(gamma_alpha)`` it generates, with decomposition both ways;
* memoized genus-zero three-point functions, built from the primary
  structure constants by reducing descendant slots through the two-point
  gradients, and the derived quantum / level-diagonal products;
* the string vector field, the degenerate pairing, and the summed lifted
  pairing that reproduces level-diagonal blocks on the ``T``-frame.

Everything is computed in a single series ring; coefficients stay exact in
rational mode.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .frobenius import FrobeniusModel
from .linalg import SeriesMatrix, mat_from_rows
from .series import ANTIHOL, HOL, TruncatedSeries

__all__ = ["FrameVector", "BigContext", "FrameError"]

Slot = Tuple[int, int]  # (level, flavor)


class FrameError(ValueError):
    """Raised when a frame operation leaves the truncated jet chart."""


# ----------------------------------------------------------------------
# vector fields on the jet chart
# ----------------------------------------------------------------------


class FrameVector:
    """A vector field written in the coordinate frame ``tau_{n, alpha}``
    (or its conjugate when ``barred``), with series coefficients."""

    __slots__ = ("ring", "comps", "barred")

    def __init__(self, ring, comps: Mapping[Slot, TruncatedSeries],
                 barred: bool = False):
        self.ring = ring
        cleaned: Dict[Slot, TruncatedSeries] = {}
        for (level, flavor), series in comps.items():
            if not (0 <= level <= ring.n_max):
                raise FrameError(f"level {level} outside truncation")
            if not (1 <= flavor <= ring.num_flavors):
                raise FrameError(f"flavor {flavor} out of range")
            if series.ring != ring:
                raise ValueError("component from a different ring")
            # Inexact zero components carry window information (the entry is
            # only known to vanish up to their valid degree), so keep them.
            if not series.is_zero or not series.exact:
                cleaned[(level, flavor)] = series
        self.comps = cleaned
        self.barred = barred

    # -- algebra -------------------------------------------------------

    def _merge(self, other: "FrameVector", sign: int) -> "FrameVector":
        if other.barred != self.barred:
            raise ValueError("cannot combine vectors of opposite type")
        out = dict(self.comps)
        for key, series in other.comps.items():
            cur = out.get(key)
            out[key] = (cur + (series if sign > 0 else -series)) if cur is not None \
                else (series if sign > 0 else -series)
        return FrameVector(self.ring, out, self.barred)

    def __add__(self, other: "FrameVector") -> "FrameVector":
        return self._merge(other, 1)

    def __sub__(self, other: "FrameVector") -> "FrameVector":
        return self._merge(other, -1)

    def __neg__(self) -> "FrameVector":
        return FrameVector(self.ring, {k: -v for k, v in self.comps.items()},
                           self.barred)

    def scale_series(self, series: TruncatedSeries) -> "FrameVector":
        return FrameVector(self.ring, {k: v * series for k, v in self.comps.items()},
                           self.barred)

    def conjugate(self) -> "FrameVector":
        return FrameVector(self.ring,
                           {k: v.conjugate() for k, v in self.comps.items()},
                           not self.barred)

    # -- analysis ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def max_abs(self):
        worst = None
        for series in self.comps.values():
            m = series.max_abs()
            worst = m if worst is None else max(worst, m)
        if worst is None:
            return 0.0 if self.ring.mode == "float" else Fraction(0)
        return worst

    def min_window(self) -> int:
        window = self.ring.d_max
        for series in self.comps.values():
            window = min(window, series.valid_degree)
        return window

    def derive(self, series: TruncatedSeries) -> TruncatedSeries:
        """Apply the vector field to a function (a first-order derivation)."""
        sector = ANTIHOL if self.barred else HOL
        total = self.ring.zero()
        for (level, flavor), coeff in self.comps.items():
            total = total + coeff * series.partial_derivative(sector, level, flavor)
        return total

    def __eq__(self, other) -> bool:
        return (isinstance(other, FrameVector) and self.barred == other.barred
                and self.comps == other.comps)

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        name = "taub" if self.barred else "tau"
        parts = [f"[{series}]*{name}({level},{flavor})"
                 for (level, flavor), series in sorted(self.comps.items())]
        return " + ".join(parts)


# ----------------------------------------------------------------------
# the jet-space context
# ----------------------------------------------------------------------


class BigContext:
    """All derived structure on the truncated jet chart of a model."""

    def __init__(self, model: FrobeniusModel, i_max: Optional[int] = None):
        self.model = model
        self.ring = model.ring
        self.n = model.n
        self.n_max = self.ring.n_max
        if self.n_max < 1:
            raise ValueError("the jet chart needs at least one descendant level")
        if i_max is None:
            i_max = self.n_max
        if i_max < self.n_max:
            raise ValueError("gradient ladder depth must reach the level cutoff")
        self.i_max = i_max
        self.flats = model.deformed_flats(i_max)
        self.eta = model.eta
        self.eta_inv = model.eta_inv

        self._rlift: Dict[Tuple[int, int, int], TruncatedSeries] = {}
        self._red: Dict[Tuple[int, int], List[TruncatedSeries]] = {}
        self._tframe: Dict[Slot, FrameVector] = {}
        self._tp: Dict[Tuple[Slot, Slot, Slot], TruncatedSeries] = {}
        self._tp_base: Dict[Tuple[int, int, int], TruncatedSeries] = {}
        self._qp_basis: Dict[Tuple[Slot, Slot], List[TruncatedSeries]] = {}
        self._dp_basis: Dict[Tuple[Slot, Slot], TruncatedSeries] = {}
        self._lift_cache: Dict[int, Tuple[TruncatedSeries, TruncatedSeries]] = {}
        self._string: Optional[FrameVector] = None
        self._unit_reduction: Optional[List[TruncatedSeries]] = None
        self._s_hat: Optional[FrameVector] = None

        self._build_u()

    # ------------------------------------------------------------------
    # the u-map and lifting
    # ------------------------------------------------------------------

    def _u_step(self, current: List[TruncatedSeries]) -> List[TruncatedSeries]:
        """One application of the fixed-point map to upper-index candidates."""
        ring = self.ring
        images = {ring.var_index(HOL, 0, f + 1): current[f] for f in range(self.n)}
        lowered = []
        for a in range(self.n):
            total = ring.zero()
            for g in range(self.n):
                total = total + ring.small_var(g + 1).scale(self.eta[a][g])
            for i in range(self.n_max):
                for b in range(self.n):
                    grad = self.flats.grad[i][a][b]
                    if grad.is_zero:
                        continue
                    jet = ring.var(HOL, i + 1, b + 1)
                    total = total + jet * grad.substitute(images)
            lowered.append(total)
        return [
            sum((lowered[a].scale(self.eta_inv[s][a]) for a in range(self.n)),
                ring.zero())
            for s in range(self.n)
        ]

    def _build_u(self) -> None:
        ring = self.ring
        current = [ring.small_var(f + 1) for f in range(self.n)]
        # Convergence must cover the trust window as well as the terms:
        # the step that first drops an above-truncation term demotes the
        # iterate to inexact even though its kept terms no longer change.
        for _ in range(2 * ring.d_max + 3):
            updated = self._u_step(current)
            if updated == current and all(
                a.exact == b.exact and a.valid_degree == b.valid_degree
                for a, b in zip(updated, current)
            ):
                break
            current = updated
        else:
            raise FrameError("fixed-point iteration for the u-map did not stabilize")
        self.u_upper: List[TruncatedSeries] = current
        self.u_lower: List[TruncatedSeries] = [
            sum((current[s].scale(self.eta[a][s]) for s in range(self.n)),
                ring.zero())
            for a in range(self.n)
        ]
        self.u_conj: List[TruncatedSeries] = [s.conjugate() for s in current]
        self._images: Dict[int, TruncatedSeries] = {}
        for f in range(self.n):
            self._images[ring.var_index(HOL, 0, f + 1)] = self.u_upper[f]
            self._images[ring.var_index(ANTIHOL, 0, f + 1)] = self.u_conj[f]
        self.m_matrix: SeriesMatrix = mat_from_rows([
            [self.u_upper[s].partial_derivative(HOL, 0, a + 1)
             for a in range(self.n)]
            for s in range(self.n)
        ])

    def u_fixed_point_defect(self):
        """Max residual of re-substituting the u-map into its own equation."""
        worst = self.ring.zero().max_abs()
        window = self.ring.d_max
        recomputed = self._u_step(self.u_upper)
        for s in range(self.n):
            diff = recomputed[s] - self.u_upper[s]
            worst = max(worst, diff.max_abs())
            window = min(window, diff.valid_degree)
        return worst, window

    def lift(self, series: TruncatedSeries) -> TruncatedSeries:
        """Evaluate a primary-chart function on the u-map (both sectors)."""
        cached = self._lift_cache.get(id(series))
        if cached is not None and cached[0] is series:
            return cached[1]
        result = series.substitute(self._images)
        self._lift_cache[id(series)] = (series, result)
        return result

    def lift_matrix(self, mat: SeriesMatrix) -> SeriesMatrix:
        return tuple(tuple(self.lift(entry) for entry in row) for row in mat)

    def rlift(self, rank: int, d_flavor: int, flavor: int) -> TruncatedSeries:
        """Lifted gradient ``R_{alpha, beta, rank}(u)`` (flavors 1-based)."""
        key = (rank, d_flavor, flavor)
        cached = self._rlift.get(key)
        if cached is None:
            cached = self.lift(self.flats.grad[rank][d_flavor - 1][flavor - 1])
            self._rlift[key] = cached
        return cached

    def two_point_lift(self, rank: int, flavor: int, d_flavor: int) -> TruncatedSeries:
        """Two-point value of a rank-``rank`` descendant against a primary."""
        return self.rlift(rank, d_flavor, flavor)

    def _reduction(self, level: int, flavor: int) -> List[TruncatedSeries]:
        """Coefficients turning a level-``level`` slot into primary slots:
        ``red[nu] = sum_mu eta^{nu mu} R_{mu, flavor, level-1}(u)``."""
        key = (level, flavor)
        cached = self._red.get(key)
        if cached is None:
            cached = [
                sum((self.rlift(level - 1, m + 1, flavor).scale(self.eta_inv[v][m])
                     for m in range(self.n)), self.ring.zero())
                for v in range(self.n)
            ]
            self._red[key] = cached
        return cached

    # ------------------------------------------------------------------
    # correlators and products
    # ------------------------------------------------------------------

    def three_point(self, s1: Slot, s2: Slot, s3: Slot) -> TruncatedSeries:
        """Genus-zero three-slot correlator on coordinate-frame slots."""
        key = (s1, s2, s3)
        cached = self._tp.get(key)
        if cached is not None:
            return cached
        slots = [s1, s2, s3]
        result = None
        for idx, (level, flavor) in enumerate(slots):
            if level > 0:
                red = self._reduction(level, flavor)
                total = self.ring.zero()
                for v in range(self.n):
                    if red[v].is_zero:
                        continue
                    reduced = list(slots)
                    reduced[idx] = (0, v + 1)
                    total = total + red[v] * self.three_point(*reduced)
                result = total
                break
        if result is None:
            result = self._tp_primary(s1[1], s2[1], s3[1])
        self._tp[key] = result
        return result

    def _tp_primary(self, f1: int, f2: int, f3: int) -> TruncatedSeries:
        key = (f1, f2, f3)
        cached = self._tp_base.get(key)
        if cached is None:
            total = self.ring.zero()
            for s in range(self.n):
                c = self.model.c_lower[f1 - 1][f2 - 1][s]
                if c.is_zero:
                    continue
                total = total + self.lift(c) * self.m_matrix[s][f3 - 1]
            cached = total
            self._tp_base[key] = cached
        return cached

    def qp_basis(self, s1: Slot, s2: Slot) -> List[TruncatedSeries]:
        """Upper-index components of the product of two basis slots."""
        key = (s1, s2)
        cached = self._qp_basis.get(key)
        if cached is None:
            cached = [
                sum((self.three_point(s1, s2, (0, v + 1)).scale(self.eta_inv[s][v])
                     for v in range(self.n)), self.ring.zero())
                for s in range(self.n)
            ]
            self._qp_basis[key] = cached
        return cached

    def quantum_product(self, w1: FrameVector, w2: FrameVector) -> FrameVector:
        """Function-bilinear product; the output is a primary vector field."""
        if w1.barred or w2.barred:
            raise ValueError("products are defined for unbarred vector fields")
        out: Dict[Slot, TruncatedSeries] = {}
        for slot1, c1 in w1.comps.items():
            for slot2, c2 in w2.comps.items():
                basis = self.qp_basis(slot1, slot2)
                weight = c1 * c2
                for s in range(self.n):
                    if basis[s].is_zero:
                        continue
                    key = (0, s + 1)
                    cur = out.get(key)
                    term = weight * basis[s]
                    out[key] = term if cur is None else cur + term
        return FrameVector(self.ring, out)

    def string_field(self) -> FrameVector:
        """The string vector field on the jet chart."""
        if self._string is None:
            ring = self.ring
            comps: Dict[Slot, TruncatedSeries] = {
                (0, self.model.unit_flavor): ring.one()
            }
            for m in range(self.n_max):
                for f in range(self.n):
                    jet = -ring.var(HOL, m + 1, f + 1)
                    key = (m, f + 1)
                    cur = comps.get(key)
                    comps[key] = jet if cur is None else cur + jet
            self._string = FrameVector(ring, comps)
        return self._string

    def _dp_slot(self, su: Slot, sv: Slot) -> TruncatedSeries:
        key = (su, sv)
        cached = self._dp_basis.get(key)
        if cached is None:
            total = self.ring.zero()
            for slot_s, coeff in self.string_field().comps.items():
                total = total + coeff * self.three_point(slot_s, su, sv)
            cached = total
            self._dp_basis[key] = cached
        return cached

    def degenerate_pairing(self, u: FrameVector, v: FrameVector) -> TruncatedSeries:
        """Three-slot correlator against the string field (rank-degenerate)."""
        total = self.ring.zero()
        for slot_u, cu in u.comps.items():
            for slot_v, cv in v.comps.items():
                base = self._dp_slot(slot_u, slot_v)
                if base.is_zero:
                    continue
                total = total + (cu * cv) * base
        return total

    def tau_minus(self, w: FrameVector) -> FrameVector:
        """Shift levels down by one, discarding the primary components."""
        return FrameVector(
            self.ring,
            {(level - 1, flavor): series
             for (level, flavor), series in w.comps.items() if level >= 1},
            w.barred,
        )

    def tau_plus(self, w: FrameVector) -> FrameVector:
        """Shift levels up by one; fails above the truncation."""
        for (level, _f), series in w.comps.items():
            if level >= self.n_max and not series.is_zero:
                raise FrameError("level shift exceeds the truncation")
        return FrameVector(
            self.ring,
            {(level + 1, flavor): series
             for (level, flavor), series in w.comps.items()},
            w.barred,
        )

    def eta_hat(self, u: FrameVector, v: FrameVector) -> TruncatedSeries:
        """Summed lifted pairing: degenerate pairings of joint down-shifts."""
        total = self.ring.zero()
        cur_u, cur_v = u, v
        while not (cur_u.is_zero or cur_v.is_zero):
            total = total + self.degenerate_pairing(cur_u, cur_v)
            cur_u, cur_v = self.tau_minus(cur_u), self.tau_minus(cur_v)
        return total

    # ------------------------------------------------------------------
    # the T-operator and its frame
    # ------------------------------------------------------------------

    def t_apply(self, w: FrameVector) -> FrameVector:
        """Closed form of the level-raising operator on a vector field."""
        if w.barred:
            raise ValueError("the level-raising operator acts on unbarred fields")
        out: Dict[Slot, TruncatedSeries] = {}

        def add(key: Slot, series: TruncatedSeries) -> None:
            cur = out.get(key)
            out[key] = series if cur is None else cur + series

        for (level, flavor), coeff in w.comps.items():
            if level >= self.n_max:
                raise FrameError("level shift exceeds the truncation")
            add((level + 1, flavor), coeff)
            red = self._reduction(level + 1, flavor)
            for v in range(self.n):
                if red[v].is_zero:
                    continue
                add((0, v + 1), -(coeff * red[v]))
        return FrameVector(self.ring, out)

    def t_apply_definitional(self, w: FrameVector) -> FrameVector:
        """The level-raising operator via the string-field product."""
        shifted = self.tau_plus(w)
        return shifted - self.quantum_product(self.string_field(), shifted)

    def t_frame(self, level: int, flavor: int) -> FrameVector:
        """The frame vector ``T^level(gamma_flavor)``."""
        key = (level, flavor)
        cached = self._tframe.get(key)
        if cached is None:
            if level == 0:
                cached = FrameVector(self.ring, {(0, flavor): self.ring.one()})
            else:
                cached = self.t_apply(self.t_frame(level - 1, flavor))
            self._tframe[key] = cached
        return cached

    def to_t_frame(self, w: FrameVector) -> Dict[Slot, TruncatedSeries]:
        """Decompose in the triangular frame (unit diagonal, top level down)."""
        if w.barred:
            raise ValueError("decomposition is defined for unbarred fields")
        residual: Dict[Slot, TruncatedSeries] = dict(w.comps)
        out: Dict[Slot, TruncatedSeries] = {}
        for level in range(self.n_max, -1, -1):
            for flavor in range(1, self.n + 1):
                coeff = residual.pop((level, flavor), None)
                if coeff is None or coeff.is_zero:
                    continue
                out[(level, flavor)] = coeff
                if level == 0:
                    continue
                frame = self.t_frame(level, flavor)
                for key, series in frame.comps.items():
                    if key == (level, flavor):
                        continue
                    cur = residual.get(key)
                    term = coeff * series
                    residual[key] = (-term) if cur is None else cur - term
        leftovers = [s for s in residual.values() if not s.is_zero]
        if leftovers:
            raise FrameError("frame decomposition left a nonzero remainder")
        return out

    def from_t_frame(self, comps: Mapping[Slot, TruncatedSeries]) -> FrameVector:
        total: Dict[Slot, TruncatedSeries] = {}
        for (level, flavor), coeff in comps.items():
            if coeff.is_zero:
                continue
            frame = self.t_frame(level, flavor)
            for key, series in frame.comps.items():
                term = coeff * series
                cur = total.get(key)
                total[key] = term if cur is None else cur + term
        return FrameVector(self.ring, total)

    def coordinate_field(self, level: int, flavor: int,
                         barred: bool = False) -> FrameVector:
        return FrameVector(self.ring, {(level, flavor): self.ring.one()}, barred)

    # ------------------------------------------------------------------
    # level-diagonal product and its unit
    # ------------------------------------------------------------------

    def unit_reduction(self) -> List[TruncatedSeries]:
        """Primary components of the string field after slot reduction;
        the unit of the primary product algebra."""
        if self._unit_reduction is None:
            out = [self.ring.zero() for _ in range(self.n)]
            for (level, flavor), coeff in self.string_field().comps.items():
                if level == 0:
                    out[flavor - 1] = out[flavor - 1] + coeff
                else:
                    red = self._reduction(level, flavor)
                    for v in range(self.n):
                        if not red[v].is_zero:
                            out[v] = out[v] + coeff * red[v]
            self._unit_reduction = out
        return self._unit_reduction

    def diamond_unit(self) -> FrameVector:
        """The unit of the level-diagonal product: the reduced string unit
        placed in every frame level."""
        if self._s_hat is None:
            e = self.unit_reduction()
            comps = {(k, f + 1): e[f]
                     for k in range(self.n_max + 1) for f in range(self.n)}
            self._s_hat = self.from_t_frame(comps)
        return self._s_hat

    def diamond(self, w1: FrameVector, w2: FrameVector) -> FrameVector:
        """Level-diagonal product in the triangular frame."""
        t1 = self.to_t_frame(w1)
        t2 = self.to_t_frame(w2)
        out: Dict[Slot, TruncatedSeries] = {}
        for (l1, f1), c1 in t1.items():
            for (l2, f2), c2 in t2.items():
                if l1 != l2:
                    continue
                basis = self.qp_basis((0, f1), (0, f2))
                weight = c1 * c2
                for s in range(self.n):
                    if basis[s].is_zero:
                        continue
                    key = (l1, s + 1)
                    term = weight * basis[s]
                    cur = out.get(key)
                    out[key] = term if cur is None else cur + term
        return self.from_t_frame(out)

    def eta_hat_frame_block(self, u: FrameVector, v: FrameVector) -> TruncatedSeries:
        """The lifted pairing evaluated through its frame-block form."""
        tu = self.to_t_frame(u)
        tv = self.to_t_frame(v)
        total = self.ring.zero()
        for (lu, fu), cu in tu.items():
            for (lv, fv), cv in tv.items():
                if lu != lv:
                    continue
                coeff = self.eta[fu - 1][fv - 1]
                if coeff == 0:
                    continue
                total = total + (cu * cv).scale(coeff)
        return total

    # ------------------------------------------------------------------
    # connections and brackets
    # ------------------------------------------------------------------

    def flat_nabla(self, direction: FrameVector, w: FrameVector) -> FrameVector:
        """Coordinate-parallel derivative (the lifted flat connection)."""
        return FrameVector(
            self.ring,
            {key: direction.derive(series) for key, series in w.comps.items()},
            w.barred,
        )

    def transport_nabla(self, direction: FrameVector, w: FrameVector) -> FrameVector:
        """Frame-parallel derivative (annihilates the triangular frame)."""
        derived = {key: direction.derive(series)
                   for key, series in self.to_t_frame(w).items()}
        return self.from_t_frame(derived)

    def bracket(self, v: FrameVector, w: FrameVector) -> FrameVector:
        """Lie bracket of two vector fields of the same type."""
        if v.barred != w.barred:
            raise ValueError("bracket of fields of opposite type")
        out: Dict[Slot, TruncatedSeries] = {}
        for key, series in w.comps.items():
            out[key] = v.derive(series)
        for key, series in v.comps.items():
            cur = out.get(key)
            term = w.derive(series)
            out[key] = (-term) if cur is None else cur - term
        return FrameVector(self.ring, out, v.barred)
