"""Pointed Frobenius structures on the primary chart.

A :class:`FrobeniusModel` bundles a flat pairing ``eta``, a prepotential ``F``
in the level-0 holomorphic coordinates, a unit flavor, and optional Euler data
``E = Q t + r`` with a weight.  Construction validates the hard gates:

* ``eta`` symmetric and invertible,
* the unit row ``c^mu_{unit,beta} = delta``,
* the string normalization ``d_unit d_beta F = eta_{beta sigma} t^sigma``
  exactly (a constant anomaly is rejected),
* associativity (WDVV): all products ``C_sigma`` commute.

The module also builds the ladder of deformed flat coordinates: ``theta_0 =
dF`` and, rank by rank, gradients solving ``d_gamma d_alpha theta_i =
c^sigma_{gamma alpha} d_sigma theta_{i-1}`` via exact Euler-homogeneous
integration, with the unit-direction constants pinned by the string
normalization and all remaining integration constants configurable
(default 0).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import (
    SeriesMatrix,
    mat_commutator,
    mat_from_rows,
    mat_identity,
    mat_max_abs,
    mat_mul,
    mat_sub,
    mat_transpose,
    scalar_mat_inverse,
)
from .scalars import magnitude
from .series import HOL, SeriesRing, TruncatedSeries, _mono_degree

__all__ = ["ModelError", "EulerData", "FrobeniusModel", "DeformedFlats", "residual_of"]


class ModelError(ValueError):
    """Raised when model data fails a structural gate (CLI exit code 2)."""


def residual_of(series: TruncatedSeries) -> Tuple[object, int]:
    """Map a residual series to ``(max coefficient magnitude, window)``."""
    window = series.ring.d_max if series.exact else series.valid_degree
    return series.max_abs(), window


def matrix_residual(mat: SeriesMatrix) -> Tuple[object, int]:
    mag = mat_max_abs(mat)
    window = min(
        (e.ring.d_max if e.exact else e.valid_degree) for row in mat for e in row
    )
    return mag, window


def euler_integrate(series: TruncatedSeries) -> TruncatedSeries:
    """Solve ``sum_alpha t^alpha d_alpha f = series`` for ``f`` with ``f(0)=0``.

    Divides every degree-``d`` coefficient by ``d``; the input must have zero
    constant term.  Windows and exactness carry over unchanged.
    """
    ring = series.ring
    out = {}
    for mono, coeff in series.terms.items():
        deg = _mono_degree(mono)
        if deg == 0:
            raise ValueError("euler_integrate requires zero constant term")
        out[mono] = coeff * (Fraction(1, deg) if ring.mode == "rational" else 1.0 / deg)
    return ring.series(out, exact=True) if series.exact else ring.series(
        out, exact=False, valid_degree=series.valid_degree
    )


class EulerData:
    """Affine Euler field ``E^sigma = Q^sigma_rho t^rho + r^sigma``."""

    def __init__(self, q: Sequence[Sequence], r: Sequence):
        self.q = tuple(tuple(row) for row in q)
        self.r = tuple(r)
        size = len(self.q)
        if any(len(row) != size for row in self.q) or len(self.r) != size:
            raise ModelError("euler data must be square Q and matching r")


class FrobeniusModel:
    """A validated Frobenius structure instantiated on a series ring.

    Parameters
    ----------
    ring:
        The ambient :class:`SeriesRing` (the model touches only level-0
        variables; holomorphic for ``F``, both sectors for real structures).
    eta:
        Flat pairing, an N x N symmetric invertible scalar matrix.
    prepotential:
        ``F`` as an exact series in the level-0 holomorphic variables.
    unit_flavor:
        1-based flavor of the flat unit direction (default 1).
    euler:
        Optional :class:`EulerData`.
    weight:
        Optional conformal weight (scalar-like), reported but never gated.
    theta_constants:
        Optional ``{(flavor, rank): value}`` integration constants for the
        deformed flat coordinates at ranks >= 1.
    tol:
        Gate tolerance; defaults to exact 0 in rational mode, 1e-9 in float.
    """

    def __init__(
        self,
        ring: SeriesRing,
        eta: Sequence[Sequence],
        prepotential: TruncatedSeries,
        *,
        unit_flavor: int = 1,
        euler: Optional[EulerData] = None,
        weight=None,
        theta_constants: Optional[Mapping[Tuple[int, int], object]] = None,
        tol=None,
    ):
        self.ring = ring
        self.n = ring.num_flavors
        if tol is None:
            tol = 0 if ring.mode == "rational" else 1e-9
        self.tol = tol
        if not 1 <= unit_flavor <= self.n:
            raise ModelError(f"unit_flavor must lie in 1..{self.n}")
        self.unit_flavor = unit_flavor
        if euler is not None:
            euler = EulerData(
                [[ring.scalar(x) for x in row] for row in euler.q],
                [ring.scalar(x) for x in euler.r],
            )
        self.euler = euler
        self.weight = ring.scalar(weight) if weight is not None else None
        self.theta_constants = dict(theta_constants or {})

        # --- pairing gates -------------------------------------------------
        self.eta = tuple(tuple(ring.scalar(x) for x in row) for row in eta)
        if len(self.eta) != self.n or any(len(row) != self.n for row in self.eta):
            raise ModelError("eta must be an N x N matrix")
        for i in range(self.n):
            for j in range(self.n):
                if not _scalar_close(ring, self.eta[i][j], self.eta[j][i], tol):
                    raise ModelError("eta must be symmetric")
        try:
            self.eta_inv = scalar_mat_inverse(ring, self.eta)
        except ValueError as exc:
            raise ModelError(f"eta must be invertible: {exc}") from exc

        # --- prepotential and structure constants -------------------------
        if prepotential.ring != ring:
            raise ModelError("prepotential must live in the model ring")
        if not prepotential.exact:
            raise ModelError("prepotential must be exact (a polynomial)")
        for mono in prepotential.terms:
            for v, _ in mono:
                sector, level, _flavor = ring.var_info(v)
                if sector != HOL or level != 0:
                    raise ModelError(
                        "prepotential may only involve level-0 holomorphic variables"
                    )
        self.prepotential = prepotential

        d = [prepotential.partial_derivative(HOL, 0, a + 1) for a in range(self.n)]
        dd = [[d[a].partial_derivative(HOL, 0, b + 1) for b in range(self.n)]
              for a in range(self.n)]
        self.c_lower = [
            [[dd[a][b].partial_derivative(HOL, 0, g + 1) for g in range(self.n)]
             for b in range(self.n)]
            for a in range(self.n)
        ]
        # C_sigma with entries (mu, beta) -> c^mu_{sigma beta}
        self.c_mat: List[SeriesMatrix] = []
        for s in range(self.n):
            rows = []
            for mu in range(self.n):
                row = []
                for b in range(self.n):
                    acc = ring.zero()
                    for e in range(self.n):
                        acc = acc + self.c_lower[e][s][b].scale(self.eta_inv[mu][e])
                    row.append(acc)
                rows.append(tuple(row))
            self.c_mat.append(mat_from_rows(rows))

        # --- unit row gate -------------------------------------------------
        unit_defect = mat_sub(self.c_mat[unit_flavor - 1], mat_identity(ring, self.n))
        mag, _ = matrix_residual(unit_defect)
        if mag > tol:
            raise ModelError(
                f"unit direction is not the eta-identity: residual {mag}"
            )

        # --- string normalization gate ------------------------------------
        worst = None
        for b in range(self.n):
            expected = ring.zero()
            for s in range(self.n):
                expected = expected + ring.small_var(s + 1).scale(self.eta[b][s])
            defect = dd[unit_flavor - 1][b] - expected
            m = defect.max_abs()
            worst = m if worst is None else max(worst, m)
        self.string_residual = worst
        if worst > tol:
            raise ModelError(
                "string normalization fails: d_unit d_beta F differs from the "
                f"eta-lowered coordinate by {worst}"
            )

        # --- associativity gate -------------------------------------------
        worst = Fraction(0) if ring.mode == "rational" else 0.0
        for s in range(self.n):
            for v in range(s + 1, self.n):
                m, _ = matrix_residual(mat_commutator(self.c_mat[s], self.c_mat[v]))
                worst = max(worst, m)
        self.wdvv_residual = worst
        if worst > tol:
            raise ModelError(f"associativity (WDVV) fails: residual {worst}")

        self._flats_cache: Dict[int, DeformedFlats] = {}

    # ------------------------------------------------------------------
    # basic helpers
    # ------------------------------------------------------------------

    def d_small(self, series: TruncatedSeries, flavor: int) -> TruncatedSeries:
        """Partial derivative along the level-0 holomorphic ``flavor``."""
        return series.partial_derivative(HOL, 0, flavor)

    def small_coordinate_lowered(self, flavor: int) -> TruncatedSeries:
        """``eta_{flavor sigma} t^sigma_0``."""
        acc = self.ring.zero()
        for s in range(self.n):
            acc = acc + self.ring.small_var(s + 1).scale(self.eta[flavor - 1][s])
        return acc

    def euler_vector(self) -> Tuple[TruncatedSeries, ...]:
        """Components ``E^sigma`` as series (requires Euler data)."""
        if self.euler is None:
            raise ModelError("model has no Euler data")
        ring = self.ring
        out = []
        for s in range(self.n):
            acc = ring.const(self.euler.r[s])
            for rho in range(self.n):
                acc = acc + ring.small_var(rho + 1).scale(self.euler.q[s][rho])
            out.append(acc)
        return tuple(out)

    def euler_derivation(self, series: TruncatedSeries) -> TruncatedSeries:
        """Apply the Euler vector field as a derivation on level-0 data."""
        e = self.euler_vector()
        acc = self.ring.zero()
        for s in range(self.n):
            acc = acc + e[s] * self.d_small(series, s + 1)
        return acc

    def r0_matrix(self) -> SeriesMatrix:
        """``R_0 = C_E``, multiplication by the Euler field."""
        e = self.euler_vector()
        acc = None
        for s in range(self.n):
            contrib = tuple(
                tuple(entry * e[s] for entry in row) for row in self.c_mat[s]
            )
            acc = contrib if acc is None else mat_from_rows(
                [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(acc, contrib)]
            )
        return acc

    def rinf_matrix(self) -> SeriesMatrix:
        """``R_infinity = Q`` as a constant series matrix."""
        if self.euler is None:
            raise ModelError("model has no Euler data")
        ring = self.ring
        return mat_from_rows(
            [[ring.const(self.euler.q[i][j]) for j in range(self.n)]
             for i in range(self.n)]
        )

    def eta_adjoint(self, mat: SeriesMatrix) -> SeriesMatrix:
        """``eta^{-1} P^T eta`` — the adjoint for the flat pairing."""
        ring = self.ring
        eta_mat = mat_from_rows(
            [[ring.const(self.eta[i][j]) for j in range(self.n)] for i in range(self.n)]
        )
        eta_inv_mat = mat_from_rows(
            [[ring.const(self.eta_inv[i][j]) for j in range(self.n)]
             for i in range(self.n)]
        )
        return mat_mul(eta_inv_mat, mat_mul(mat_transpose(mat), eta_mat))

    # ------------------------------------------------------------------
    # flat-side residual catalogue
    # ------------------------------------------------------------------

    def saito_small_checks(self) -> List[Tuple[str, object, int, str]]:
        """Residuals of the flat-structure axioms on the primary chart.

        Returns ``(check_id, residual, window, note)`` tuples in a fixed
        order.  Euler-dependent entries are omitted when the model carries no
        Euler data; the caller reports them as skipped.
        """
        ring = self.ring
        out: List[Tuple[str, object, int, str]] = []
        zero = Fraction(0) if ring.mode == "rational" else 0.0

        out.append(("saito.flatness", zero, ring.d_max,
                    "coordinate frame is parallel by construction"))
        out.append(("saito.nabla_eta", zero, ring.d_max, "eta is constant"))

        worst, window = zero, ring.d_max
        for s in range(self.n):
            for v in range(self.n):
                defect = mat_sub(
                    _mat_d(self.c_mat[s], v + 1), _mat_d(self.c_mat[v], s + 1)
                )
                m, w = matrix_residual(defect)
                worst, window = max(worst, m), min(window, w)
        out.append(("saito.d_nabla_C", worst, window,
                    "antisymmetrized coordinate derivative of the product tensor"))

        out.append(("saito.C_wedge_C", self.wdvv_residual, ring.d_max,
                    "pairwise commutators of the products (associativity)"))

        worst, window = zero, ring.d_max
        for s in range(self.n):
            defect = mat_sub(self.eta_adjoint(self.c_mat[s]), self.c_mat[s])
            m, w = matrix_residual(defect)
            worst, window = max(worst, m), min(window, w)
        out.append(("saito.C_selfadjoint", worst, window,
                    "products are self-adjoint for the flat pairing"))

        if self.euler is not None:
            r0 = self.r0_matrix()
            rinf = self.rinf_matrix()
            for label, sign in (("plus", 1), ("minus", -1)):
                worst, window = zero, ring.d_max
                for s in range(self.n):
                    step = _mat_d(r0, s + 1)
                    comm = mat_commutator(self.c_mat[s], rinf)
                    if sign > 0:
                        defect = [[step[i][j] + self.c_mat[s][i][j] - comm[i][j]
                                   for j in range(self.n)] for i in range(self.n)]
                    else:
                        defect = [[step[i][j] - self.c_mat[s][i][j] + comm[i][j]
                                   for j in range(self.n)] for i in range(self.n)]
                    m, w = matrix_residual(mat_from_rows(defect))
                    worst, window = max(worst, m), min(window, w)
                out.append((f"saito.nabla_R0_{label}", worst, window,
                            f"d(R0) {'+' if sign > 0 else '-'} C "
                            f"{'-' if sign > 0 else '+'} [C, Rinf]"))

            worst, window = zero, ring.d_max
            for s in range(self.n):
                m, w = matrix_residual(mat_commutator(r0, self.c_mat[s]))
                worst, window = max(worst, m), min(window, w)
            out.append(("saito.R0_C_commute", worst, window,
                        "multiplication by E commutes with every product"))

            m, w = matrix_residual(mat_sub(self.eta_adjoint(r0), r0))
            out.append(("saito.R0_selfadjoint", m, w, ""))

            out.append(("saito.nabla_Rinf", zero, ring.d_max, "Q is constant"))

            if self.weight is not None:
                adj = self.eta_adjoint(rinf)
                ident = mat_identity(ring, self.n)
                for label, sgn in (("plus", 1), ("minus", -1)):
                    defect = [
                        [adj[i][j] + rinf[i][j]
                         + ident[i][j].scale(self.weight if sgn > 0 else -self.weight)
                         for j in range(self.n)]
                        for i in range(self.n)
                    ]
                    m, w = matrix_residual(mat_from_rows(defect))
                    out.append((f"saito.weight_{label}", m, w,
                                "Rinf adjoint defect against the stored weight"))

                lie = [[zero for _ in range(self.n)] for _ in range(self.n)]
                for a in range(self.n):
                    for b in range(self.n):
                        acc = ring.scalar(0)
                        for s in range(self.n):
                            acc = (acc + self.euler.q[s][a] * self.eta[s][b]
                                   + self.euler.q[s][b] * self.eta[a][s])
                        lie[a][b] = acc
                for label, sgn in (("plus", 1), ("minus", -1)):
                    worst = zero
                    for a in range(self.n):
                        for b in range(self.n):
                            w_term = self.weight if sgn > 0 else -self.weight
                            defect = lie[a][b] + w_term * self.eta[a][b]
                            worst = max(worst, magnitude(defect))
                    out.append((f"saito.lie_eta_{label}", worst, ring.d_max,
                                "Lie derivative of eta against the stored weight"))
        return out

    # ------------------------------------------------------------------
    # deformed flat coordinates
    # ------------------------------------------------------------------

    def deformed_flats(self, i_max: int) -> "DeformedFlats":
        if i_max not in self._flats_cache:
            self._flats_cache[i_max] = DeformedFlats(self, i_max)
        return self._flats_cache[i_max]


def _scalar_close(ring: SeriesRing, a, b, tol) -> bool:
    return magnitude(a - b) <= tol


def _mat_d(mat: SeriesMatrix, flavor: int) -> SeriesMatrix:
    return tuple(
        tuple(entry.partial_derivative(HOL, 0, flavor) for entry in row) for row in mat
    )


class DeformedFlats:
    """The ladder of deformed flat coordinates over a Frobenius model.

    ``theta[i][b]`` (0-based flavor ``b``) is the rank-``i`` deformed flat
    function for flavor ``b+1``; ``grad[i][a][b]`` is its partial derivative
    along flavor ``a+1``.  Rank 0 is the gradient of the prepotential; each
    later rank solves the recursion ``d_gamma grad_alpha = c^sigma_{gamma
    alpha} grad_sigma(previous)`` by exact homogeneous integration, with the
    unit-direction constant pinned by the string normalization and all other
    constants taken from the model's ``theta_constants`` (default 0).
    Integrability of each solve is verified and a failure raises
    :class:`ModelError`.
    """

    def __init__(self, model: FrobeniusModel, i_max: int):
        if i_max < 0:
            raise ValueError("i_max must be non-negative")
        self.model = model
        self.i_max = i_max
        ring = model.ring
        n = model.n
        unit = model.unit_flavor - 1

        self.theta: List[List[TruncatedSeries]] = []
        self.grad: List[List[List[TruncatedSeries]]] = []

        d_f = [model.prepotential.partial_derivative(HOL, 0, b + 1) for b in range(n)]
        self.theta.append(d_f)
        self.grad.append(
            [[d_f[b].partial_derivative(HOL, 0, a + 1) for b in range(n)]
             for a in range(n)]
        )

        for i in range(1, i_max + 1):
            prev_theta = self.theta[i - 1]
            prev_grad = self.grad[i - 1]
            rank_theta: List[TruncatedSeries] = []
            rank_grad: List[List[TruncatedSeries]] = [[None] * n for _ in range(n)]
            for b in range(n):
                source = [
                    [_contract_c(model, g, a, prev_grad, b) for a in range(n)]
                    for g in range(n)
                ]
                grads: List[TruncatedSeries] = []
                for a in range(n):
                    radial = ring.zero()
                    for g in range(n):
                        radial = radial + ring.small_var(g + 1) * source[g][a]
                    r_a = euler_integrate(radial)
                    if a == unit:
                        r_a = r_a + ring.const(prev_theta[b].constant_term())
                    grads.append(r_a)
                for g in range(n):
                    for a in range(n):
                        defect = grads[a].partial_derivative(HOL, 0, g + 1) - source[g][a]
                        if defect.max_abs() > model.tol:
                            raise ModelError(
                                f"deformed flats rank {i} flavor {b + 1} are not "
                                f"integrable: residual {defect.max_abs()}"
                            )
                radial = ring.zero()
                for a in range(n):
                    radial = radial + ring.small_var(a + 1) * grads[a]
                theta_b = euler_integrate(radial) + ring.const(
                    model.theta_constants.get((b + 1, i), 0)
                )
                for a in range(n):
                    defect = theta_b.partial_derivative(HOL, 0, a + 1) - grads[a]
                    if defect.max_abs() > model.tol:
                        raise ModelError(
                            f"deformed flat rank {i} flavor {b + 1} gradient "
                            f"mismatch: residual {defect.max_abs()}"
                        )
                string_defect = grads[unit] - prev_theta[b]
                if string_defect.max_abs() > model.tol:
                    raise ModelError(
                        f"string recursion fails at rank {i} flavor {b + 1}: "
                        f"residual {string_defect.max_abs()}"
                    )
                rank_theta.append(theta_b)
                for a in range(n):
                    rank_grad[a][b] = grads[a]
            self.theta.append(rank_theta)
            self.grad.append(rank_grad)

    def theta_series(self, flavor: int, rank: int) -> TruncatedSeries:
        return self.theta[rank][flavor - 1]

    def grad_series(self, d_flavor: int, flavor: int, rank: int) -> TruncatedSeries:
        """``d_{d_flavor} theta_{flavor, rank}``."""
        return self.grad[rank][d_flavor - 1][flavor - 1]


def _contract_c(
    model: FrobeniusModel,
    g: int,
    a: int,
    prev_grad: List[List[TruncatedSeries]],
    b: int,
) -> TruncatedSeries:
    """``sum_sigma c^sigma_{g a} * prev_grad[sigma][b]`` (0-based indices)."""
    ring = model.ring
    acc = ring.zero()
    for s in range(model.n):
        acc = acc + model.c_mat[g][s][a] * prev_grad[s][b]
    return acc
