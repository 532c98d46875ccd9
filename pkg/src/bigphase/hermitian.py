"""Hermitian (real-structure) data on the primary chart.

A :class:`HermitianStructure` attaches to a Frobenius model an antilinear
involution ``k`` given by its matrix ``K`` (series in the level-0 variables,
both sectors), inducing the sesquilinear pairing ``h(X, Y) = eta(X, k Y)``
with matrix ``H = eta K`` (linear in the first slot, antilinear in the
second).  From ``H`` the module derives:

* the metric connection in the holomorphic directions, ``A_sigma`` with
  ``d_sigma H_{gamma nu} = (A_sigma)^mu_gamma H_{mu nu}``, whose (0,1)-part
  is plain d-bar in this frame;
* its curvature ``R_{sigma nubar} = -dbar_nu A_sigma``;
* the ``h``-adjoint ``P -> conj(H^{-1} P^T H)`` and the adjoint Higgs field
  ``Cdag_nubar``;
* residuals of the flatness (tt*) equations, the five Lax coefficients, and
  the optional potential / CV-structure equations.

Gates: ``k`` must be an exact involution (``K conj(K) = Id``) and ``H(0)``
invertible; Hermitian symmetry of ``H`` and metric-compatibility of the flat
pairing are measured and reported, never assumed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .frobenius import FrobeniusModel, ModelError, matrix_residual
from .linalg import (
    SeriesMatrix,
    mat_commutator,
    mat_conjugate,
    mat_from_rows,
    mat_identity,
    mat_inverse,
    mat_map,
    mat_max_abs,
    mat_mul,
    mat_sub,
    mat_transpose,
)
from .series import ANTIHOL, HOL, TruncatedSeries

__all__ = ["HermitianStructure"]


def _d(mat: SeriesMatrix, flavor: int) -> SeriesMatrix:
    return mat_map(mat, lambda s: s.partial_derivative(HOL, 0, flavor))


def _dbar(mat: SeriesMatrix, flavor: int) -> SeriesMatrix:
    return mat_map(mat, lambda s: s.partial_derivative(ANTIHOL, 0, flavor))


class HermitianStructure:
    """Real-structure data and the derived metric/curvature machinery.

    Parameters
    ----------
    model:
        The underlying validated :class:`FrobeniusModel`.
    k_matrix:
        Matrix of the antilinear involution on the coordinate frame, as
        series in level-0 variables of both sectors.
    potential_a, cv_u, cv_q:
        Optional endomorphism-valued data for the potential and
        CV-structure checks (series matrices, level-0 variables).
    """

    def __init__(
        self,
        model: FrobeniusModel,
        k_matrix: SeriesMatrix,
        *,
        potential_a: Optional[SeriesMatrix] = None,
        cv_u: Optional[SeriesMatrix] = None,
        cv_q: Optional[SeriesMatrix] = None,
    ):
        self.model = model
        ring = model.ring
        n = model.n
        self.k = mat_from_rows(k_matrix)
        for row in self.k:
            for entry in row:
                for mono in entry.terms:
                    for v, _ in mono:
                        if ring.var_info(v)[1] != 0:
                            raise ModelError(
                                "real structure may only involve level-0 variables"
                            )

        involution_defect = mat_sub(
            mat_mul(self.k, mat_conjugate(self.k)), mat_identity(ring, n)
        )
        self.involution_residual, self.involution_window = matrix_residual(
            involution_defect
        )
        if self.involution_residual > model.tol:
            raise ModelError(
                f"real structure is not an involution: residual "
                f"{self.involution_residual}"
            )

        self.eta_mat = mat_from_rows(
            [[ring.const(model.eta[i][j]) for j in range(n)] for i in range(n)]
        )
        self.h = mat_mul(self.eta_mat, self.k)
        try:
            self.h_inv = mat_inverse(self.h)
        except ValueError as exc:
            raise ModelError(f"hermitian pairing is degenerate at 0: {exc}") from exc

        herm_defect = mat_sub(self.h, mat_conjugate(mat_transpose(self.h)))
        self.hermitian_symmetry_residual, self.hermitian_symmetry_window = (
            matrix_residual(herm_defect)
        )

        # Metric connection: solve d_sigma H = A_sigma^T H.
        self.chern_a: List[SeriesMatrix] = [
            mat_transpose(mat_mul(_d(self.h, s + 1), self.h_inv)) for s in range(n)
        ]
        # Curvature R_{sigma nubar} = -dbar_nu A_sigma.
        self.curvature: List[List[SeriesMatrix]] = [
            [mat_map(_dbar(self.chern_a[s], v + 1), lambda x: -x) for v in range(n)]
            for s in range(n)
        ]
        self.c_dagger: List[SeriesMatrix] = [
            self.h_adjoint(model.c_mat[v]) for v in range(n)
        ]

        self.potential_a = mat_from_rows(potential_a) if potential_a else None
        self.cv_u = mat_from_rows(cv_u) if cv_u else None
        self.cv_q = mat_from_rows(cv_q) if cv_q else None

    # ------------------------------------------------------------------
    # operators
    # ------------------------------------------------------------------

    def h_adjoint(self, p: SeriesMatrix) -> SeriesMatrix:
        """Adjoint for ``h``: ``P -> conj(H^{-1} P^T H)``."""
        return mat_conjugate(mat_mul(self.h_inv, mat_mul(mat_transpose(p), self.h)))

    def k_sandwich(self, p: SeriesMatrix) -> SeriesMatrix:
        """Matrix of ``k P k`` for the antilinear ``k``: ``K conj(P) conj(K)``."""
        return mat_mul(self.k, mat_mul(mat_conjugate(p), mat_conjugate(self.k)))

    def d_eta_matrix(self, flavor: int) -> SeriesMatrix:
        """Components of the metric-connection derivative of the flat pairing:
        ``(D_sigma eta)_{ab} = -(A_sigma^T eta + eta A_sigma)_{ab}``."""
        n = self.model.n
        a = self.chern_a[flavor - 1]
        left = mat_mul(mat_transpose(a), self.eta_mat)
        right = mat_mul(self.eta_mat, a)
        return mat_from_rows(
            [[-(left[i][j] + right[i][j]) for j in range(n)] for i in range(n)]
        )

    def chern_defining_residual(self, flavor: int) -> SeriesMatrix:
        """``d_sigma H - A_sigma^T H`` (zero within the window by construction)."""
        s = flavor - 1
        return mat_sub(
            _d(self.h, flavor), mat_mul(mat_transpose(self.chern_a[s]), self.h)
        )

    def dd_c_matrix(self, s: int, v: int) -> SeriesMatrix:
        """tt* first-equation residual along the (0-based) pair ``(s, v)``:
        ``D_s C_v - D_v C_s`` with ``D_s P = d_s P + [A_s, P]``."""
        model = self.model
        term = mat_sub(_d(model.c_mat[v], s + 1), _d(model.c_mat[s], v + 1))
        comm = mat_sub(
            mat_commutator(self.chern_a[s], model.c_mat[v]),
            mat_commutator(self.chern_a[v], model.c_mat[s]),
        )
        return mat_from_rows(
            [[term[i][j] + comm[i][j] for j in range(model.n)]
             for i in range(model.n)]
        )

    def tt_second_matrix(self, s: int, v: int) -> SeriesMatrix:
        """tt* second-equation residual: ``R_{s vbar} + [C_s, Cdag_vbar]``."""
        comm = mat_commutator(self.model.c_mat[s], self.c_dagger[v])
        return mat_from_rows(
            [[self.curvature[s][v][i][j] + comm[i][j] for j in range(self.model.n)]
             for i in range(self.model.n)]
        )

    def dbar_cdag_matrix(self, s: int, v: int) -> SeriesMatrix:
        """Antiholomorphic antisymmetrized derivative of the adjoint Higgs
        field: ``dbar_s Cdag_v - dbar_v Cdag_s`` (the (0,1)-connection is
        plain d-bar in this frame)."""
        return mat_sub(_dbar(self.c_dagger[v], s + 1), _dbar(self.c_dagger[s], v + 1))

    # ------------------------------------------------------------------
    # residual catalogue on the primary chart
    # ------------------------------------------------------------------

    def metric_small_checks(self) -> List[Tuple[str, object, int, str]]:
        """Reported (never gated) metric residuals."""
        out = []
        out.append(("metric.small.k_involution", self.involution_residual,
                    self.involution_window, "gate: exact involution required"))
        out.append(("metric.small.h_hermitian_symmetry", self.hermitian_symmetry_residual,
                    self.hermitian_symmetry_window,
                    "reported only; not required of the supplied k"))
        worst, window = None, None
        for s in range(self.model.n):
            m, w = matrix_residual(self.d_eta_matrix(s + 1))
            worst = m if worst is None else max(worst, m)
            window = w if window is None else min(window, w)
        out.append(("metric.small.d_eta", worst, window,
                    "metric-connection derivative of the flat pairing; "
                    "hypothesis for the lifted conditional checks"))
        return out

    def ttstar_small_checks(self) -> List[Tuple[str, object, int, str]]:
        """Flatness-equation residuals (hypothesis data for the lifts)."""
        n = self.model.n
        out = []
        worst, window = Fraction(0), self.model.ring.d_max
        for s in range(n):
            for v in range(s + 1, n):
                m, w = matrix_residual(self.dd_c_matrix(s, v))
                worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.small.first", worst, window,
                    "antisymmetrized metric-covariant derivative of the Higgs field"))
        worst, window = Fraction(0), self.model.ring.d_max
        for s in range(n):
            for v in range(n):
                m, w = matrix_residual(self.tt_second_matrix(s, v))
                worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.small.second", worst, window,
                    "curvature against the Higgs commutator"))
        return out

    def lax_small_checks(self) -> List[Tuple[str, object, int, str]]:
        """The five Lax-pencil coefficient residuals on the primary chart."""
        model = self.model
        n = model.n
        ring = model.ring

        def pair_worst(fn, same_ok: bool):
            worst, window = Fraction(0) if ring.mode == "rational" else 0.0, ring.d_max
            for s in range(n):
                for v in range(s if same_ok else s + 1, n):
                    m, w = matrix_residual(fn(s, v))
                    worst, window = max(worst, m), min(window, w)
            return worst, window

        out = []
        m, w = pair_worst(lambda s, v: mat_commutator(model.c_mat[s], model.c_mat[v]),
                          same_ok=False)
        out.append(("lax.small.l2", m, w, "quadratic coefficient: C wedge C"))
        m, w = pair_worst(self.dd_c_matrix, same_ok=False)
        out.append(("lax.small.l1", m, w, "linear coefficient: covariant dC"))
        m, w = pair_worst(self.tt_second_matrix, same_ok=True)
        out.append(("lax.small.l0", m, w, "constant coefficient: curvature + [C, Cdag]"))
        m, w = pair_worst(self.dbar_cdag_matrix, same_ok=False)
        out.append(("lax.small.lm1", m, w, "inverse coefficient: covariant dbar Cdag"))
        m, w = pair_worst(lambda s, v: mat_commutator(self.c_dagger[s], self.c_dagger[v]),
                          same_ok=False)
        out.append(("lax.small.lm2", m, w, "inverse-square coefficient: Cdag wedge Cdag"))
        return out

    def potential_small_checks(self) -> List[Tuple[str, object, int, str]]:
        """Residuals of the potentiality equations for a supplied potential."""
        if self.potential_a is None:
            return []
        model = self.model
        n = model.n
        a_pot = self.potential_a
        a_dag = self.h_adjoint(a_pot)
        out = []

        worst, window = Fraction(0), model.ring.d_max
        for s in range(n):
            step = _d(a_pot, s + 1)
            comm = mat_commutator(self.chern_a[s], a_pot)
            defect = mat_from_rows(
                [[step[i][j] + comm[i][j] - model.c_mat[s][i][j]
                  for j in range(n)] for i in range(n)]
            )
            m, w = matrix_residual(defect)
            worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.potential_gradient", worst, window,
                    "metric-covariant derivative of the potential equals the Higgs field"))

        worst, window = Fraction(0), model.ring.d_max
        for s in range(n):
            comm = mat_commutator(a_dag, model.c_mat[s])
            defect = mat_from_rows(
                [[self.chern_a[s][i][j] + comm[i][j] for j in range(n)]
                 for i in range(n)]
            )
            m, w = matrix_residual(defect)
            worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.potential_connection", worst, window,
                    "metric connection equals the flat one up to [adjoint potential, C]"))

        if model.euler is not None:
            g = mat_from_rows(
                [[model.rinf_matrix()[i][j]
                  + mat_commutator(a_dag, model.r0_matrix())[i][j]
                  for j in range(n)] for i in range(n)]
            )
            defect = mat_sub(g, self.h_adjoint(g))
            m, w = matrix_residual(defect)
            out.append(("ttstar.potential_grading", m, w,
                        "graded combination is h-self-adjoint"))
        return out

    def cv_small_checks(self) -> List[Tuple[str, object, int, str]]:
        """Residuals of the CV-structure equations for supplied (U, Q)."""
        if self.cv_u is None or self.cv_q is None:
            return []
        model = self.model
        n = model.n
        u_mat, q_mat = self.cv_u, self.cv_q
        out = []

        worst, window = Fraction(0), model.ring.d_max
        for s in range(n):
            m, w = matrix_residual(mat_commutator(model.c_mat[s], u_mat))
            worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.cv_commute", worst, window, "[C, U] = 0"))

        worst, window = Fraction(0), model.ring.d_max
        for s in range(n):
            du = _d(u_mat, s + 1)
            du = mat_from_rows(
                [[du[i][j] + mat_commutator(self.chern_a[s], u_mat)[i][j]
                  for j in range(n)] for i in range(n)]
            )
            defect = mat_from_rows(
                [[du[i][j] + mat_commutator(model.c_mat[s], q_mat)[i][j]
                  - model.c_mat[s][i][j] for j in range(n)] for i in range(n)]
            )
            m, w = matrix_residual(defect)
            worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.cv_grading_u", worst, window, "D U + [C, Q] - C = 0"))

        kuk = self.k_sandwich(u_mat)
        worst, window = Fraction(0), model.ring.d_max
        for s in range(n):
            dq = _d(q_mat, s + 1)
            dq = mat_from_rows(
                [[dq[i][j] + mat_commutator(self.chern_a[s], q_mat)[i][j]
                  for j in range(n)] for i in range(n)]
            )
            defect = mat_from_rows(
                [[dq[i][j] - mat_commutator(model.c_mat[s], kuk)[i][j]
                  for j in range(n)] for i in range(n)]
            )
            m, w = matrix_residual(defect)
            worst, window = max(worst, m), min(window, w)
        out.append(("ttstar.cv_grading_q", worst, window, "D Q - [C, k U k] = 0"))

        m, w = matrix_residual(mat_sub(self.h_adjoint(u_mat), kuk))
        out.append(("ttstar.cv_u_reality", m, w, "U adjoint equals k U k"))
        m, w = matrix_residual(mat_sub(self.h_adjoint(q_mat), q_mat))
        out.append(("ttstar.cv_q_selfadjoint", m, w, "Q is h-self-adjoint"))
        return out
