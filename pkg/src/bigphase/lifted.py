"""Level-uniform lifts of primary-chart structures to the jet chart.

Structure tensors on the primary chart (Higgs field, metric connection,
real structure, pairing, grading operators) lift to the jet chart as
level-uniform block operators on the triangular frame ``T^n(gamma_alpha)``:
an ``N x N`` series matrix acts identically on every frame level, and
direction dependence enters only through the primary frame components of
the direction, transported by the Jacobian ``M``.

This module builds those block operators and the derived covariant
derivatives; the residual bookkeeping lives in the verification catalogue.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .context import BigContext, FrameVector, Slot
from .hermitian import HermitianStructure
from .linalg import (
    SeriesMatrix,
    mat_from_rows,
    mat_map,
    mat_mul,
    mat_transpose,
)
from .series import TruncatedSeries

__all__ = ["LiftedStructure"]


def _weighted_sum(weights: List[TruncatedSeries],
                  mats: List[SeriesMatrix]) -> SeriesMatrix:
    """``sum_s weights[s] * mats[s]`` for series matrices."""
    n = len(mats[0])
    ring = mats[0][0][0].ring
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            total = ring.zero()
            for s, w in enumerate(weights):
                if w.is_zero or mats[s][i][j].is_zero:
                    continue
                total = total + w * mats[s][i][j]
            row.append(total)
        rows.append(row)
    return mat_from_rows(rows)


class LiftedStructure:
    """Block-operator lifts attached to a jet-space context."""

    def __init__(self, ctx: BigContext,
                 herm: Optional[HermitianStructure] = None):
        self.ctx = ctx
        self.herm = herm
        model = ctx.model
        self.n = ctx.n
        self.clift: List[SeriesMatrix] = [
            ctx.lift_matrix(model.c_mat[s]) for s in range(self.n)
        ]
        # Direction-basis Higgs blocks: sum_sigma M^sigma_alpha C_sigma(u).
        self.higgs_basis: List[SeriesMatrix] = [
            _weighted_sum([ctx.m_matrix[s][a] for s in range(self.n)], self.clift)
            for a in range(self.n)
        ]
        self.eta_const: SeriesMatrix = mat_from_rows(
            [[ctx.ring.const(model.eta[i][j]) for j in range(self.n)]
             for i in range(self.n)]
        )
        self.eta_inv_const: SeriesMatrix = mat_from_rows(
            [[ctx.ring.const(model.eta_inv[i][j]) for j in range(self.n)]
             for i in range(self.n)]
        )
        if herm is not None:
            self.flift: List[SeriesMatrix] = [
                ctx.lift_matrix(herm.chern_a[s]) for s in range(self.n)
            ]
            self.cdaglift: List[SeriesMatrix] = [
                ctx.lift_matrix(herm.c_dagger[s]) for s in range(self.n)
            ]
            self.hlift: SeriesMatrix = ctx.lift_matrix(herm.h)
            self.hinvlift: SeriesMatrix = ctx.lift_matrix(herm.h_inv)
            self.klift: SeriesMatrix = ctx.lift_matrix(herm.k)
            self.gamma_basis: List[SeriesMatrix] = [
                _weighted_sum([ctx.m_matrix[s][a] for s in range(self.n)],
                              self.flift)
                for a in range(self.n)
            ]
            self.cdag_basis: List[SeriesMatrix] = [
                _weighted_sum(
                    [ctx.m_matrix[s][b].conjugate() for s in range(self.n)],
                    self.cdaglift,
                )
                for b in range(self.n)
            ]

    # ------------------------------------------------------------------
    # block plumbing
    # ------------------------------------------------------------------

    def primary_frame_components(self, v: FrameVector) -> List[TruncatedSeries]:
        """Level-0 components of the direction in the triangular frame."""
        tv = self.ctx.to_t_frame(v)
        return [tv.get((0, a + 1), self.ctx.ring.zero()) for a in range(self.n)]

    def direction_blocks(self, v: FrameVector,
                         basis: List[SeriesMatrix]) -> SeriesMatrix:
        """Contract a direction with per-flavor block matrices."""
        return _weighted_sum(self.primary_frame_components(v), basis)

    def apply_blocks(self, blocks: SeriesMatrix, w: FrameVector,
                     conjugate_argument: bool = False) -> FrameVector:
        """Apply one ``N x N`` block to every level of the frame decomposition."""
        tw = self.ctx.to_t_frame(w)
        out: Dict[Slot, TruncatedSeries] = {}
        for (level, flavor), coeff in tw.items():
            if conjugate_argument:
                coeff = coeff.conjugate()
            for mu in range(self.n):
                entry = blocks[mu][flavor - 1]
                if entry.is_zero:
                    continue
                key = (level, mu + 1)
                term = entry * coeff
                cur = out.get(key)
                out[key] = term if cur is None else cur + term
        return self.ctx.from_t_frame(out)

    # ------------------------------------------------------------------
    # lifted operators
    # ------------------------------------------------------------------

    def higgs_hat(self, v: FrameVector, w: FrameVector) -> FrameVector:
        """The lifted Higgs action along a holomorphic direction."""
        return self.apply_blocks(self.direction_blocks(v, self.higgs_basis), w)

    def dhat(self, v: FrameVector, w: FrameVector) -> FrameVector:
        """Metric connection, (1,0)-part: frame-parallel transport plus the
        transported connection blocks."""
        base = self.ctx.transport_nabla(v, w)
        return base + self.apply_blocks(
            self.direction_blocks(v, self.gamma_basis), w
        )

    def dhat_bar(self, vbar: FrameVector, w: FrameVector) -> FrameVector:
        """Metric connection, (0,1)-part: plain conjugate-variable derivative
        (the frame transition matrices are holomorphic)."""
        if not vbar.barred:
            raise ValueError("the (0,1)-part needs a conjugate direction")
        return self.ctx.flat_nabla(vbar, w)

    def cdag_hat(self, vbar: FrameVector, w: FrameVector) -> FrameVector:
        """The lifted adjoint Higgs action along a conjugate direction."""
        if not vbar.barred:
            raise ValueError("the adjoint Higgs field needs a conjugate direction")
        comps = [c.conjugate()
                 for c in self.primary_frame_components(vbar.conjugate())]
        return self.apply_blocks(_weighted_sum(comps, self.cdag_basis), w)

    def k_hat(self, w: FrameVector) -> FrameVector:
        """Lifted real structure: level-uniform, antilinear on frame components."""
        return self.apply_blocks(self.klift, w, conjugate_argument=True)

    def h_pairing(self, x: FrameVector, y: FrameVector) -> TruncatedSeries:
        """Lifted sesquilinear pairing through its frame-block form."""
        tx = self.ctx.to_t_frame(x)
        ty = self.ctx.to_t_frame(y)
        total = self.ctx.ring.zero()
        for (lx, fx), cx in tx.items():
            for (ly, fy), cy in ty.items():
                if lx != ly:
                    continue
                entry = self.hlift[fx - 1][fy - 1]
                if entry.is_zero:
                    continue
                total = total + cx * cy.conjugate() * entry
        return total

    def h_adjoint_blocks(self, blocks: SeriesMatrix) -> SeriesMatrix:
        """Block-level adjoint for the lifted pairing."""
        return mat_map(
            mat_mul(self.hinvlift, mat_mul(mat_transpose(blocks), self.hlift)),
            lambda s: s.conjugate(),
        )

    def eta_adjoint_blocks(self, blocks: SeriesMatrix) -> SeriesMatrix:
        """Block-level adjoint for the lifted flat pairing."""
        return mat_mul(self.eta_inv_const,
                       mat_mul(mat_transpose(blocks), self.eta_const))
