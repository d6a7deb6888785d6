"""End-to-end construction: instance with D = 0 -> integer representation."""

from __future__ import annotations

from dataclasses import dataclass

from .finite_order import FiniteOrderExtension, extend_to_finite_order
from .hnn import HnnInstance
from .raag import (
    NormalClosureData,
    Presentation,
    RaagCertificate,
    SchreierData,
    build_tilde,
    certify_raag,
    normal_closure_data,
    schreier_rewrite,
)
from .reps import InducedRepresentation, MatrixRep, induce_and_restrict, raag_to_matrices


@dataclass
class PipelineResult:
    """Every intermediate object; ``representation`` is None when certification is obstructed.

    When K_bar is a proper subgroup, the representation acts on words of the
    multiple extension over K_bar (``closure.instance`` with ``closure.n``
    stable letters) rather than on G itself.
    """

    instance: HnnInstance
    extension: FiniteOrderExtension
    closure: NormalClosureData
    presentation: Presentation
    schreier: SchreierData
    certificate: RaagCertificate
    kernel_rep: MatrixRep | None
    representation: InducedRepresentation | None

    @property
    def acts_on_g(self) -> bool:
        return self.extension.index_in_K == 1

    @property
    def word_instance(self) -> HnnInstance:
        return self.instance if self.acts_on_g else self.closure.instance


def run_pipeline(inst: HnnInstance, ext: FiniteOrderExtension | None = None) -> PipelineResult:
    if ext is None:
        ext = extend_to_finite_order(inst)
    closure = normal_closure_data(inst, ext)
    if ext.index_in_K == 1:
        target_ext, n, A = ext, 1, ext.K_bar & inst.A
    else:
        target_ext, n, A = closure.extension, closure.n, closure.instance.A
    pres = build_tilde(target_ext, n, A)
    data = schreier_rewrite(pres)
    if data.kernel_index() != pres.nu:
        raise AssertionError("kernel index differs from nu")
    cert = certify_raag(data)
    kernel_rep = rep = None
    if cert.is_raag:
        kernel_rep = raag_to_matrices(cert.graph)
        rep = induce_and_restrict(kernel_rep, data, cert, target_ext)
    return PipelineResult(inst, ext, closure, pres, data, cert, kernel_rep, rep)
