"""gf-Riesz and gf-orthonormal basis tests, and the cross operator.

The cross operator V links a gf-orthonormal system Theta to an arbitrary
g-fusion frame Lambda on the same subspaces and weights, via
``L_j P_j = T_j P_j V^H`` for every block.  Its classification (adjoint
isometric / invertible / unitary) mirrors what Lambda is (Parseval /
gf-Riesz / gf-orthonormal).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionFailed
from .linalg import adjoint, hermitian_eigen_extremes, operator_norm, orthonormalize
from .system import (
    FrameBounds,
    GFusionSystem,
    analysis_matrix,
    frame_bounds,
    frame_operator,
    is_gf_complete,
    synthesis_matrix,
)


@dataclass(frozen=True)
class BasisVerdict:
    is_riesz: bool
    riesz_bounds: FrameBounds | None
    is_gf_orthonormal: bool
    gram_deviation: float      # max block deviation of the weighted Gram from delta_ij * I
    parseval_deviation: float  # ||S - I||


def riesz_bounds(sys: GFusionSystem, tol: float = 1e-9) -> FrameBounds | None:
    """Optimal gf-Riesz bounds, or None when the system is not a gf-Riesz basis.

    The bounds are the eigenvalue extremes of the synthesis Gram matrix
    T^H T over the full direct sum; in finite dimension this is equivalent to
    the two-sided inequality over every finite block subset.  The verdict
    requires gf-completeness and smallest singular value above ``tol``.
    """
    t = synthesis_matrix(sys)
    gram = adjoint(t) @ t
    ext = hermitian_eigen_extremes(gram)
    lower = max(ext.min_eig, 0.0)
    # A domain larger than the ambient space forces a kernel regardless of
    # what eigvalsh returns for the PSD Gram.
    if gram.shape[0] > sys.dim:
        lower = 0.0
    if not is_gf_complete(sys) or np.sqrt(lower) <= tol:
        return None
    return FrameBounds(lower, ext.max_eig, "optimal-spectral")


def _gram_block_deviation(sys: GFusionSystem) -> float:
    a = analysis_matrix(sys)
    gram = a @ adjoint(a)
    dims = sys.block_dims
    offsets = np.concatenate([[0], np.cumsum(dims)])
    dev = 0.0
    for i in range(len(dims)):
        for j in range(len(dims)):
            block = gram[offsets[i]:offsets[i + 1], offsets[j]:offsets[j + 1]]
            if i == j:
                block = block - np.eye(dims[i])
            dev = max(dev, operator_norm(block))
    return dev


def is_gf_orthonormal(sys: GFusionSystem, tol: float = 1e-9) -> BasisVerdict:
    """Check the two gf-orthonormal basis conditions.

    (a) the weighted Gram blocks v_i v_j L_j P_j P_i L_i^H equal
        delta_ij * identity within ``tol`` (the operator form of the
        universally quantified inner-product condition), and
    (b) the frame operator equals the identity within ``tol``.
    """
    gram_dev = _gram_block_deviation(sys)
    pars_dev = operator_norm(frame_operator(sys) - np.eye(sys.dim))
    rb = riesz_bounds(sys, tol)
    return BasisVerdict(
        is_riesz=rb is not None,
        riesz_bounds=rb,
        is_gf_orthonormal=bool(gram_dev <= tol and pars_dev <= tol),
        gram_deviation=gram_dev,
        parseval_deviation=pars_dev,
    )


@dataclass(frozen=True)
class CrossOperatorReport:
    matrix: np.ndarray
    intertwine_residual: float   # max_j ||L_j P_j - T_j P_j V^H||
    norm: float                  # ||V||
    bessel_norm_bound: float     # sqrt(B) of lambda; ||V|| stays below this
    surjective: bool
    adjoint_isometric: bool | None = None
    invertible: bool | None = None
    unitary: bool | None = None


def _require_same_structure(theta: GFusionSystem, lam: GFusionSystem, tol: float):
    if theta.field != lam.field:
        raise PreconditionFailed("systems use different scalar fields")
    if theta.dim != lam.dim:
        raise PreconditionFailed("systems have different ambient dimensions")
    if theta.block_count != lam.block_count or theta.block_dims != lam.block_dims:
        raise PreconditionFailed("systems have different block structure")
    if not np.allclose(theta.weights, lam.weights, rtol=0.0, atol=1e-12):
        raise PreconditionFailed("systems have different weights")
    for i, (ts, ls) in enumerate(zip(theta.subsystems, lam.subsystems)):
        if not ts.subspace.agrees_with(ls.subspace, tol):
            raise PreconditionFailed(f"subspace {i} differs between the systems")


def cross_operator(theta: GFusionSystem, lam: GFusionSystem, tol: float = 1e-9) -> CrossOperatorReport:
    """Assemble V = sum_j v_j^2 P_j L_j^H T_j P_j and check the intertwining.

    ``theta`` must be gf-orthonormal and share (dim, blocks, weights,
    subspaces) with ``lam``; ``lam`` must be a g-fusion frame.
    """
    _require_same_structure(theta, lam, tol)
    if not is_gf_orthonormal(theta, tol).is_gf_orthonormal:
        raise PreconditionFailed("theta is not a gf-orthonormal basis at the given tolerance")
    fb = frame_bounds(lam)
    if fb is None:
        raise PreconditionFailed("lambda is not a g-fusion frame")
    v = synthesis_matrix(lam) @ analysis_matrix(theta)
    residual = 0.0
    vh = adjoint(v)
    for lsub, tsub in zip(lam.subsystems, theta.subsystems):
        lhs = lsub.operator @ lsub.subspace.projector()
        rhs = (tsub.operator @ tsub.subspace.projector()) @ vh
        residual = max(residual, operator_norm(lhs - rhs))
    sv = np.linalg.svd(v, compute_uv=False)
    surjective = bool(sv.size and sv[0] > 0 and sv[-1] > 1e-10 * sv[0] and v.shape[0] == lam.dim)
    return CrossOperatorReport(
        matrix=v,
        intertwine_residual=float(residual),
        norm=float(sv[0]) if sv.size else 0.0,
        bessel_norm_bound=float(np.sqrt(fb.upper)),
        surjective=surjective,
    )


def classify_cross_operator(
    report: CrossOperatorReport, lam: GFusionSystem, tol: float = 1e-9
) -> CrossOperatorReport:
    """Fill in the adjoint-isometric / invertible / unitary flags.

    Invertibility uses the smallest singular value with an absolute threshold
    scaled by the largest one.
    """
    v = report.matrix
    eye = np.eye(v.shape[0])
    adj_iso = operator_norm(v @ adjoint(v) - eye) <= tol
    sv = np.linalg.svd(v, compute_uv=False)
    invertible = bool(sv.size and sv[-1] > tol * sv[0])
    return dataclasses.replace(
        report,
        adjoint_isometric=bool(adj_iso),
        invertible=invertible,
        unitary=bool(adj_iso and invertible),
    )


@dataclass(frozen=True)
class DecompositionReport:
    """Per-block isometry and orthogonal-decomposition diagnostics.

    For a gf-orthonormal system every v_j P_j L_j^H is an isometry of the
    block space into the ambient space, the images are mutually orthogonal,
    and their dimensions sum to the ambient dimension.
    """

    isometry_deviation: float
    image_overlap: float
    image_dims: tuple[int, ...]
    decomposes: bool


def decomposition_report(sys: GFusionSystem, tol: float = 1e-9) -> DecompositionReport:
    iso_dev = 0.0
    images = []
    for sub in sys.subsystems:
        k = sub.weight * (sub.subspace.projector() @ adjoint(sub.operator))
        iso_dev = max(iso_dev, operator_norm(adjoint(k) @ k - np.eye(sub.block_dim)))
        images.append(orthonormalize(k).basis)
    overlap = 0.0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            overlap = max(overlap, operator_norm(adjoint(images[i]) @ images[j]))
    dims = tuple(b.shape[1] for b in images)
    decomposes = bool(sum(dims) == sys.dim and overlap <= tol and iso_dev <= tol)
    return DecompositionReport(float(iso_dev), float(overlap), dims, decomposes)
