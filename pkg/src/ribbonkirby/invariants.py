"""One-call invariant bundles and cross-construction consistency checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .convert import surface_to_kirby
from .kirby import GeneralizedKirbyDiagram
from .link import LabelledLink
from .ribbon import RibbonDiagram

Group = Tuple[int, Tuple[int, ...]]  # (free rank, torsion factors)


@dataclass(frozen=True)
class InvariantBundle:
    source: str  # "ribbon" | "gkd" | "link"
    degree: int
    components: int
    chi_surface: Optional[int]  # chi(F), ribbon sources only
    chi: Optional[int]  # chi(M)
    h1: Optional[Group]  # H_1(M)
    boundary_h1: Optional[Group]  # H_1(boundary M)
    signature: Optional[int]  # None when undefined (dotted components survive)
    signature_defined: bool
    orientable: Optional[bool]  # ribbon sources only

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "degree": self.degree,
            "components": self.components,
            "chi_surface": self.chi_surface,
            "chi": self.chi,
            "h1": list(self.h1) if self.h1 is not None else None,
            "boundary_h1": list(self.boundary_h1) if self.boundary_h1 is not None else None,
            "signature": self.signature,
            "signature_defined": self.signature_defined,
            "orientable": self.orientable,
        }


def _group(g: Group) -> Group:
    return (g[0], tuple(g[1]))


def _gkd_bundle_fields(k: GeneralizedKirbyDiagram):
    chi = k.euler_characteristic()
    h1 = _group(k.h1())
    if k.component_count() == 1:
        reduced = k.reduce_to_ordinary()
        bh1 = _group(reduced.boundary_h1())
        if reduced.dotted:
            sig, defined = None, False
        else:
            sig, defined = reduced.signature(), True
    else:
        bh1, sig, defined = None, None, False
    return chi, h1, bh1, sig, defined


def bundle(x) -> InvariantBundle:
    """All applicable invariants of a diagram, computed exactly."""
    if isinstance(x, RibbonDiagram):
        rep = x.validate()
        if not rep.ok:
            raise ValueError(f"invalid ribbon diagram: {rep.errors[0].message}")
        k = surface_to_kirby(x)
        chi_f = x.euler_characteristic()
        chi, h1, bh1, sig, defined = _gkd_bundle_fields(k)
        if chi != x.degree - chi_f:
            raise AssertionError(
                f"chi mismatch: handle count gives {chi}, degree - chi(F) gives {x.degree - chi_f}")
        return InvariantBundle(
            source="ribbon", degree=x.degree, components=x.covering_component_count(),
            chi_surface=chi_f, chi=chi, h1=h1, boundary_h1=bh1,
            signature=sig, signature_defined=defined, orientable=x.is_orientable())
    if isinstance(x, GeneralizedKirbyDiagram):
        rep = x.validate()
        if not rep.ok:
            raise ValueError(f"invalid kirby diagram: {rep.errors[0].message}")
        chi, h1, bh1, sig, defined = _gkd_bundle_fields(x)
        return InvariantBundle(
            source="gkd", degree=x.zero_handles, components=x.component_count(),
            chi_surface=None, chi=chi, h1=h1, boundary_h1=bh1,
            signature=sig, signature_defined=defined, orientable=None)
    if isinstance(x, LabelledLink):
        inv = x.link_invariants()
        return InvariantBundle(
            source="link", degree=x.degree, components=inv["component_count"],
            chi_surface=None, chi=None, h1=None, boundary_h1=None,
            signature=None, signature_defined=False, orientable=None)
    raise TypeError(f"no invariant bundle for {type(x).__name__}")


def assert_equal_invariants(a: InvariantBundle, b: InvariantBundle) -> dict:
    """Field-by-field comparison ignoring fields undefined on either side."""
    skip = {"source", "chi_surface", "orientable", "signature_defined"}
    diffs = {}
    da, db = a.as_dict(), b.as_dict()
    for key in da:
        if key in skip:
            continue
        va, vb = da[key], db[key]
        if va is None or vb is None:
            continue
        if va != vb:
            diffs[key] = (va, vb)
    return {"equal": not diffs, "diffs": diffs}
