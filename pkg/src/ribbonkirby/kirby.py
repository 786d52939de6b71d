"""Generalized Kirby diagrams: multiple 0-handles, labelled dotted and framed
components, 2-deformation and boundary moves, reduction to ordinary diagrams,
and exact homology of the handlebody and its boundary.

Conventions (fixed once, exposed results are convention-independent):
  - a piercing entering side 0 of a dotted disk counts +1 in incidence;
  - right-handed crossings have sign +1;
  - a crossing between arcs carrying *different* sheet labels is notation
    only (the arcs live on the boundaries of different 0-handles) and never
    contributes to linking; reduction drops such crossings before fusing
    0-handles;
  - framings are stored blackboard-relative as an even half-twist counter t,
    with the homological framing f = writhe + t/2 derived only when d0 = 1.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .intmatrix import IntMatrix, cokernel, homology, signature_of_symmetric
from .ribbon import ValidationReport, id_key

OVER = "over"
UNDER = "under"


@dataclass(frozen=True)
class Pierce:
    dotted: str
    enter: int  # 0 or 1: which side the strand enters


@dataclass(frozen=True)
class KCross:
    crossing: str
    role: str


@dataclass
class DottedComponent:
    id: str
    sides: Tuple[int, int]


@dataclass
class FramedComponent:
    id: str
    events: List = field(default_factory=list)
    labels: List[int] = field(default_factory=list)  # labels[k] = arc after events[k]; [base] if no events
    twists: int = 0  # blackboard-relative half-twist counter t


@dataclass
class KCrossing:
    id: str
    sign: int


@dataclass
class FramedLink:
    """Surgery presentation: plain framed link with integer framings."""

    components: List[Tuple[str, int]]  # (id, framing)
    crossings: List[Tuple[str, int, str, str]]  # (id, sign, over comp, under comp)


class GeneralizedKirbyDiagram:
    def __init__(self, zero_handles: int, dotted: Iterable[DottedComponent] = (),
                 framed: Iterable[FramedComponent] = (), crossings: Iterable[KCrossing] = ()):
        self.zero_handles = zero_handles
        self.dotted: Dict[str, DottedComponent] = {d.id: d for d in dotted}
        self.framed: Dict[str, FramedComponent] = {f.id: f for f in framed}
        self.crossings: Dict[str, KCrossing] = {c.id: c for c in crossings}

    # ------------------------------------------------------------ helpers

    def copy(self) -> "GeneralizedKirbyDiagram":
        return copy.deepcopy(self)

    def fresh_id(self, prefix: str) -> str:
        pools = {"u": self.dotted, "k": self.framed, "x": self.crossings}
        pool = pools[prefix]
        n = 0
        while f"{prefix}{n}" in pool:
            n += 1
        return f"{prefix}{n}"

    def sorted_dotted(self) -> List[DottedComponent]:
        return [self.dotted[k] for k in sorted(self.dotted, key=id_key)]

    def sorted_framed(self) -> List[FramedComponent]:
        return [self.framed[k] for k in sorted(self.framed, key=id_key)]

    @staticmethod
    def arc_before(comp: FramedComponent, k: int) -> int:
        return comp.labels[k - 1] if k > 0 else comp.labels[-1]

    def is_ordinary(self) -> bool:
        return self.zero_handles == 1

    def piercings(self, dotted_id: str) -> List[Tuple[str, int, int]]:
        """(framed id, event index, enter side) of every pierce of the disk."""
        out = []
        for c in self.sorted_framed():
            for i, e in enumerate(c.events):
                if isinstance(e, Pierce) and e.dotted == dotted_id:
                    out.append((c.id, i, e.enter))
        return out

    def pierce_is_real(self, comp: FramedComponent, k: int) -> bool:
        e = comp.events[k]
        d = self.dotted[e.dotted]
        return self.arc_before(comp, k) == d.sides[e.enter]

    def crossing_visits(self, cid: str) -> List[Tuple[str, int, str]]:
        out = []
        for c in self.sorted_framed():
            for i, e in enumerate(c.events):
                if isinstance(e, KCross) and e.crossing == cid:
                    out.append((c.id, i, e.role))
        return out

    def writhe(self, fid: str) -> int:
        w = 0
        for cid, c in self.crossings.items():
            visits = self.crossing_visits(cid)
            if len(visits) == 2 and visits[0][0] == fid and visits[1][0] == fid:
                w += c.sign
        return w

    def framing(self, fid: str) -> int:
        """Homological framing; only meaningful for ordinary diagrams."""
        if not self.is_ordinary():
            raise ValueError("homological framing is defined only for ordinary diagrams")
        c = self.framed[fid]
        if c.twists % 2:
            raise ValueError(f"odd twist counter on {fid} in an ordinary diagram")
        return self.writhe(fid) + c.twists // 2

    # --------------------------------------------------------- validation

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        if self.zero_handles < 1:
            rep.add("zero-handles", f"need at least one 0-handle, got {self.zero_handles}")
        d0 = self.zero_handles
        for d in self.dotted.values():
            if not all(1 <= s <= d0 for s in d.sides):
                rep.add("sides", f"dotted {d.id} sides {d.sides} out of range", d.id)
        for c in self.framed.values():
            want = len(c.events) if c.events else 1
            if len(c.labels) != want:
                rep.add("labels-length", f"framed {c.id}: {len(c.labels)} labels for {len(c.events)} events", c.id)
                continue
            if not all(1 <= l <= d0 for l in c.labels):
                rep.add("label-range", f"framed {c.id} has labels outside 1..{d0}", c.id)
                continue
            for k, e in enumerate(c.events):
                before = self.arc_before(c, k)
                after = c.labels[k]
                if isinstance(e, Pierce):
                    if e.dotted not in self.dotted:
                        rep.add("pierce-ref", f"framed {c.id} pierces missing dotted {e.dotted}", c.id)
                        continue
                    if e.enter not in (0, 1):
                        rep.add("pierce-side", f"framed {c.id} event {k} enter {e.enter}", c.id)
                        continue
                    sides = self.dotted[e.dotted].sides
                    if before == sides[e.enter]:
                        if after != sides[1 - e.enter]:
                            rep.add("pierce-label",
                                    f"framed {c.id} event {k}: expected {sides[1 - e.enter]} after piercing, got {after}",
                                    c.id, e.dotted)
                    elif before == after and before not in sides:
                        rep.warn("derogation",
                                 f"framed {c.id} event {k}: label {before} crosses disk {e.dotted} with sides {sides}",
                                 c.id, e.dotted)
                    else:
                        rep.add("pierce-admissible",
                                f"framed {c.id} event {k}: arcs {before}->{after} at disk {e.dotted} with sides {sides}",
                                c.id, e.dotted)
                elif isinstance(e, KCross):
                    if e.crossing not in self.crossings:
                        rep.add("cross-ref", f"framed {c.id} references missing crossing {e.crossing}", c.id)
                        continue
                    if before != after:
                        rep.add("cross-label", f"framed {c.id} event {k}: labels change only at piercings", c.id)
                else:
                    rep.add("event", f"framed {c.id} event {k} unknown", c.id)
            if d0 == 1 and c.twists % 2:
                rep.add("framing-parity", f"framed {c.id} twist counter must be even when d0 = 1", c.id)
        for cid, c in self.crossings.items():
            visits = self.crossing_visits(cid)
            roles = sorted(v[2] for v in visits)
            if len(visits) != 2 or roles != [OVER, UNDER]:
                rep.add("crossing-visits", f"crossing {cid}: {len(visits)} visits, roles {roles}", cid)
            if c.sign not in (1, -1):
                rep.add("crossing-sign", f"crossing {cid} sign {c.sign}", cid)
        return rep

    def normalize_derogations(self) -> "GeneralizedKirbyDiagram":
        """Remove derogation crossings (framed arcs drawn across foreign disks)."""
        out = self.copy()
        for c in out.framed.values():
            keep_events, keep_labels = [], []
            for k, e in enumerate(c.events):
                if isinstance(e, Pierce) and not out.pierce_is_real(c, k):
                    continue
                keep_events.append(e)
                keep_labels.append(c.labels[k])
            if not keep_events:
                keep_labels = [c.labels[0]] if c.labels else [1]
            c.events = keep_events
            c.labels = keep_labels
        return out

    # --------------------------------------------------------- invariants

    def euler_characteristic(self) -> int:
        return self.zero_handles - len(self.dotted) + len(self.framed)

    def component_count(self) -> int:
        parent = list(range(self.zero_handles + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = self.zero_handles
        for d in self.dotted.values():
            a, b = find(d.sides[0]), find(d.sides[1])
            if a != b:
                parent[a] = b
                count -= 1
        return count

    def chain_boundary_matrices(self) -> Tuple[IntMatrix, IntMatrix]:
        dotted_ids = [d.id for d in self.sorted_dotted()]
        framed_ids = [f.id for f in self.sorted_framed()]
        didx = {d: i for i, d in enumerate(dotted_ids)}
        d1 = IntMatrix(self.zero_handles, len(dotted_ids))
        for j, did in enumerate(dotted_ids):
            i, k = self.dotted[did].sides
            d1.data[i - 1][j] += 1
            d1.data[k - 1][j] -= 1
        d2 = IntMatrix(len(dotted_ids), len(framed_ids))
        for j, fid in enumerate(framed_ids):
            comp = self.framed[fid]
            for k, e in enumerate(comp.events):
                if isinstance(e, Pierce) and self.pierce_is_real(comp, k):
                    d2.data[didx[e.dotted]][j] += 1 if e.enter == 0 else -1
        return d1, d2

    def h1(self) -> Tuple[int, Tuple[int, ...]]:
        d1, d2 = self.chain_boundary_matrices()
        return homology(d2, d1)

    # ---------------------------------------------------------- reduction

    def _redirect_side(self, dotted_id: str, side_idx: int, gate_id: str) -> None:
        """1-handle slide: move one end of a dotted component off the doomed
        0-handle through the gate, detouring every strand that used it."""
        dp = self.dotted[dotted_id]
        gate = self.dotted[gate_id]
        doomed = dp.sides[side_idx]
        keep = gate.sides[0] if gate.sides[1] == doomed else gate.sides[1]
        gate_enter_from_doomed = 0 if gate.sides[0] == doomed else 1
        gate_enter_from_keep = 1 - gate_enter_from_doomed
        sides = list(dp.sides)
        sides[side_idx] = keep
        dp.sides = tuple(sides)
        for comp in self.sorted_framed():
            hits = [k for k, e in enumerate(comp.events)
                    if isinstance(e, Pierce) and e.dotted == dotted_id]
            for k in reversed(hits):
                e = comp.events[k]
                before = self.arc_before(comp, k)
                after = comp.labels[k]
                if e.enter == side_idx and before == doomed:
                    # strand arrives from the doomed zone: route it through the gate first
                    comp.events.insert(k, Pierce(gate_id, gate_enter_from_doomed))
                    comp.labels.insert(k, keep)
                elif e.enter == 1 - side_idx and after == doomed:
                    # strand exits into the doomed zone: it now exits at keep and detours back
                    comp.labels[k] = keep
                    comp.events.insert(k + 1, Pierce(gate_id, gate_enter_from_keep))
                    comp.labels.insert(k + 1, doomed)

    def reduce_to_ordinary(self) -> "GeneralizedKirbyDiagram":
        if self.component_count() != 1:
            raise ValueError("reduce_to_ordinary requires a connected handlebody")
        out = self.copy()
        # crossings between arcs of different labels are overlap notation only
        out._drop_mixed_crossings()
        while out.zero_handles > 1:
            d = out.zero_handles
            gate = None
            for comp in out.sorted_dotted():
                if d in comp.sides and comp.sides[0] != comp.sides[1]:
                    gate = comp
                    break
            if gate is None:
                raise ValueError(f"0-handle {d} is not joined to the rest (disconnected)")
            keep = gate.sides[0] if gate.sides[1] == d else gate.sides[1]
            for comp in out.sorted_dotted():
                if comp.id == gate.id:
                    continue
                for side_idx in (0, 1):
                    if comp.sides[side_idx] == d:
                        out._redirect_side(comp.id, side_idx, gate.id)
            # cancel the 0/1 pair: erase the gate's piercings, fuse the zones
            for comp in out.sorted_framed():
                hits = [k for k, e in enumerate(comp.events)
                        if isinstance(e, Pierce) and e.dotted == gate.id]
                for k in reversed(hits):
                    del comp.events[k]
                    del comp.labels[k]
                if not comp.labels:
                    comp.labels = [keep]
                comp.labels = [keep if l == d else l for l in comp.labels]
            del out.dotted[gate.id]
            out.zero_handles = d - 1
        return out

    def _drop_mixed_crossings(self) -> None:
        bad = set()
        for cid in list(self.crossings):
            visits = self.crossing_visits(cid)
            labels = set()
            for fid, k, _role in visits:
                labels.add(self.framed[fid].labels[k])
            if len(labels) > 1:
                bad.add(cid)
        for cid in bad:
            del self.crossings[cid]
        for comp in self.framed.values():
            keep_events, keep_labels = [], []
            for k, e in enumerate(comp.events):
                if isinstance(e, KCross) and e.crossing in bad:
                    continue
                if isinstance(e, KCross) and e.crossing not in self.crossings:
                    continue
                keep_events.append(e)
                keep_labels.append(comp.labels[k])
            if not keep_events:
                keep_labels = [comp.labels[0]] if comp.labels else [1]
            comp.events = keep_events
            comp.labels = keep_labels

    # --------------------------------------------------- boundary algebra

    def surgery_presentation(self) -> FramedLink:
        """Boundary surgery link of an ordinary diagram: dotted components
        become 0-framed unknots, each piercing two equal-sign crossings."""
        if not self.is_ordinary():
            raise ValueError("surgery presentation requires an ordinary diagram")
        comps: List[Tuple[str, int]] = []
        for f in self.sorted_framed():
            comps.append((f.id, self.framing(f.id)))
        for d in self.sorted_dotted():
            comps.append((d.id, 0))
        crossings: List[Tuple[str, int, str, str]] = []
        for cid in sorted(self.crossings, key=id_key):
            visits = self.crossing_visits(cid)
            if len(visits) != 2:
                continue
            over = next(v for v in visits if v[2] == OVER)
            under = next(v for v in visits if v[2] == UNDER)
            crossings.append((cid, self.crossings[cid].sign, over[0], under[0]))
        n = 0
        for d in self.sorted_dotted():
            for fid, k, enter in self.piercings(d.id):
                comp = self.framed[fid]
                if not self.pierce_is_real(comp, k):
                    continue
                s = 1 if enter == 0 else -1
                crossings.append((f"p{n}a", s, d.id, fid))
                crossings.append((f"p{n}b", s, d.id, fid))
                n += 1
        return FramedLink(comps, crossings)

    def boundary_h1(self) -> Tuple[int, Tuple[int, ...]]:
        k = self if self.is_ordinary() else self.reduce_to_ordinary()
        return cokernel(linking_matrix(k.surgery_presentation()))

    def signature(self) -> int:
        if not self.is_ordinary():
            raise ValueError("signature requires an ordinary diagram")
        if self.dotted:
            raise ValueError("signature is restricted to diagrams without dotted components")
        return signature_of_symmetric(linking_matrix(self.surgery_presentation()))

    # ------------------------------------------------------ serialization

    def to_payload(self) -> dict:
        def ev(e):
            if isinstance(e, Pierce):
                return {"t": "pierce", "dotted": e.dotted, "enter": e.enter}
            if isinstance(e, KCross):
                return {"t": "cross", "id": e.crossing, "role": e.role}
            raise TypeError(e)

        return {
            "zero_handles": self.zero_handles,
            "dotted": [{"id": d.id, "sides": list(d.sides)} for d in self.sorted_dotted()],
            "framed": [
                {"id": f.id, "events": [ev(e) for e in f.events], "labels": list(f.labels), "twists": f.twists}
                for f in self.sorted_framed()
            ],
            "crossings": [
                {"id": c.id, "sign": c.sign}
                for c in (self.crossings[k] for k in sorted(self.crossings, key=id_key))
            ],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "GeneralizedKirbyDiagram":
        def ev(d):
            if d["t"] == "pierce":
                return Pierce(d["dotted"], d["enter"])
            if d["t"] == "cross":
                return KCross(d["id"], d["role"])
            raise ValueError(f"unknown event type {d['t']!r}")

        dotted = [DottedComponent(d["id"], tuple(d["sides"])) for d in payload["dotted"]]
        framed = [
            FramedComponent(f["id"], [ev(e) for e in f["events"]], list(f["labels"]), f.get("twists", 0))
            for f in payload["framed"]
        ]
        crossings = [KCrossing(c["id"], c["sign"]) for c in payload["crossings"]]
        return cls(payload["zero_handles"], dotted, framed, crossings)


def linking_matrix(link: FramedLink) -> IntMatrix:
    """Symmetric linking matrix: framings on the diagonal, half the signed
    inter-component crossing sum off it."""
    ids = [c[0] for c in link.components]
    idx = {cid: i for i, cid in enumerate(ids)}
    n = len(ids)
    sums = [[0] * n for _ in range(n)]
    for _cid, sign, over, under in link.crossings:
        i, j = idx[over], idx[under]
        if i != j:
            sums[i][j] += sign
            sums[j][i] += sign
    m = IntMatrix(n, n)
    for i in range(n):
        m.data[i][i] = link.components[i][1]
        for j in range(n):
            if i != j:
                if sums[i][j] % 2:
                    raise ValueError(
                        f"odd signed crossing sum between {ids[i]} and {ids[j]}: malformed code")
                m.data[i][j] = sums[i][j] // 2
    return m
