"""Labelled ribbon-surface diagrams with adapted 1-handle structure.

A diagram is a purely combinatorial code: disks (0-handles) carry
transposition labels, bands (1-handles) attach to disk boundary slots and
carry an ordered event list (half twists, passes through disk interiors,
band/band crossings) together with explicitly stored per-segment labels.
Segment labels are stored rather than derived; validate() checks the local
label rules, which keeps validation total and O(#events).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .permutation import Transposition, conjugate, orbit_count

FRONT = "front"
BACK = "back"
OVER = "over"
UNDER = "under"


def id_key(eid: str) -> Tuple:
    """Natural sort key: 'b10' sorts after 'b2'."""
    head = eid.rstrip("0123456789")
    tail = eid[len(head):]
    return (head, int(tail) if tail else -1, eid)


@dataclass(frozen=True)
class HalfTwist:
    sign: int  # +1 or -1


@dataclass(frozen=True)
class Pass:
    disk: str
    side: str  # FRONT or BACK: which face of the disk the band enters
    slot: int


@dataclass(frozen=True)
class Cross:
    crossing: str
    role: str  # OVER or UNDER


Event = object  # HalfTwist | Pass | Cross


@dataclass
class Disk:
    id: str
    label: Transposition
    role: str = ""
    gap: int = 0  # escape-gap index for the connecting arcs of the diagram map


@dataclass
class Band:
    id: str
    ends: Tuple[Tuple[str, int], Tuple[str, int]]  # (disk id, boundary slot) per end
    events: List[Event] = field(default_factory=list)
    labels: List[Transposition] = field(default_factory=list)  # len(events) + 1


@dataclass
class RCrossing:
    id: str
    sign: int


@dataclass(frozen=True)
class MoveSite:
    kind: str
    refs: Tuple


@dataclass
class ValidationEntry:
    code: str
    message: str
    elements: Tuple[str, ...] = ()


@dataclass
class ValidationReport:
    errors: List[ValidationEntry] = field(default_factory=list)
    warnings: List[ValidationEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, code: str, message: str, *elements: str) -> None:
        self.errors.append(ValidationEntry(code, message, tuple(elements)))

    def warn(self, code: str, message: str, *elements: str) -> None:
        self.warnings.append(ValidationEntry(code, message, tuple(elements)))


class RibbonDiagram:
    """Combinatorial code of a labelled ribbon surface; treat as immutable."""

    def __init__(self, degree: int, disks: Iterable[Disk] = (), bands: Iterable[Band] = (),
                 crossings: Iterable[RCrossing] = ()):
        self.degree = degree
        self.disks: Dict[str, Disk] = {d.id: d for d in disks}
        self.bands: Dict[str, Band] = {b.id: b for b in bands}
        self.crossings: Dict[str, RCrossing] = {c.id: c for c in crossings}

    # ------------------------------------------------------------ helpers

    def copy(self) -> "RibbonDiagram":
        return copy.deepcopy(self)

    def fresh_id(self, prefix: str) -> str:
        n = 0
        pools = {"d": self.disks, "b": self.bands, "c": self.crossings}
        pool = pools[prefix]
        while f"{prefix}{n}" in pool:
            n += 1
        return f"{prefix}{n}"

    def sorted_disks(self) -> List[Disk]:
        return [self.disks[k] for k in sorted(self.disks, key=id_key)]

    def sorted_bands(self) -> List[Band]:
        return [self.bands[k] for k in sorted(self.bands, key=id_key)]

    def all_labels(self) -> List[Transposition]:
        out = [d.label for d in self.disks.values()]
        for b in self.bands.values():
            out.extend(b.labels)
        return out

    def crossing_visits(self, cid: str) -> List[Tuple[str, int, str]]:
        """(band id, event index, role) for each event referencing cid."""
        visits = []
        for b in self.sorted_bands():
            for i, e in enumerate(b.events):
                if isinstance(e, Cross) and e.crossing == cid:
                    visits.append((b.id, i, e.role))
        return visits

    def over_label(self, cid: str) -> Optional[Transposition]:
        for b in self.bands.values():
            for i, e in enumerate(b.events):
                if isinstance(e, Cross) and e.crossing == cid and e.role == OVER:
                    return b.labels[i]
        return None

    def pass_slots(self, disk_id: str) -> List[int]:
        slots = []
        for b in self.bands.values():
            for e in b.events:
                if isinstance(e, Pass) and e.disk == disk_id:
                    slots.append(e.slot)
        return sorted(slots)

    def next_pass_slot(self, disk_id: str) -> int:
        slots = self.pass_slots(disk_id)
        return (max(slots) + 1) if slots else 0

    def next_end_slot(self, disk_id: str) -> int:
        slots = [-1]
        for b in self.bands.values():
            for did, slot in b.ends:
                if did == disk_id:
                    slots.append(slot)
        return max(slots) + 1

    def attachments(self, disk_id: str) -> List[Tuple[str, int]]:
        """(band id, end index) attached to the disk, deterministic order."""
        out = []
        for b in self.sorted_bands():
            for end_idx, (did, _slot) in enumerate(b.ends):
                if did == disk_id:
                    out.append((b.id, end_idx))
        return out

    def passes_through(self, disk_id: str) -> List[Tuple[str, int]]:
        out = []
        for b in self.sorted_bands():
            for i, e in enumerate(b.events):
                if isinstance(e, Pass) and e.disk == disk_id:
                    out.append((b.id, i))
        return out

    # --------------------------------------------------------- validation

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        if self.degree < 2:
            rep.add("degree", f"degree must be >= 2, got {self.degree}")
        if not self.disks:
            rep.add("empty", "diagram has no disks")
        for d in self.disks.values():
            if not d.label.within(self.degree):
                rep.add("disk-label", f"disk {d.id} label {d.label} exceeds degree {self.degree}", d.id)
        used_slots = set()
        for b in self.bands.values():
            for did, slot in b.ends:
                if did not in self.disks:
                    rep.add("end-disk", f"band {b.id} attaches to missing disk {did}", b.id)
                    continue
                key = (did, slot)
                if key in used_slots:
                    rep.add("slot-reuse", f"boundary slot {key} used twice", b.id, did)
                used_slots.add(key)
            if len(b.labels) != len(b.events) + 1:
                rep.add("labels-length", f"band {b.id} has {len(b.labels)} labels for {len(b.events)} events", b.id)
                continue
            for lab in b.labels:
                if not lab.within(self.degree):
                    rep.add("segment-label", f"band {b.id} segment label {lab} exceeds degree", b.id)
            for end_idx in (0, 1):
                did = b.ends[end_idx][0]
                if did in self.disks:
                    want = self.disks[did].label
                    got = b.labels[0] if end_idx == 0 else b.labels[-1]
                    if got != want:
                        rep.add("end-label", f"band {b.id} end {end_idx} label {got} != disk {did} label {want}",
                                b.id, did)
            for i, e in enumerate(b.events):
                before, after = b.labels[i], b.labels[i + 1]
                if isinstance(e, HalfTwist):
                    if e.sign not in (1, -1):
                        rep.add("twist-sign", f"band {b.id} event {i} has sign {e.sign}", b.id)
                    if after != before:
                        rep.add("twist-label", f"band {b.id} event {i}: half twist must preserve label", b.id)
                elif isinstance(e, Pass):
                    if e.disk not in self.disks:
                        rep.add("pass-disk", f"band {b.id} passes through missing disk {e.disk}", b.id)
                        continue
                    if e.side not in (FRONT, BACK):
                        rep.add("pass-side", f"band {b.id} event {i} side {e.side}", b.id)
                    mu = self.disks[e.disk].label
                    if after != conjugate(before, mu):
                        rep.add("pass-label",
                                f"band {b.id} event {i}: pass through {e.disk} must map {before} to {conjugate(before, mu)}, got {after}",
                                b.id, e.disk)
                elif isinstance(e, Cross):
                    if e.crossing not in self.crossings:
                        rep.add("cross-id", f"band {b.id} references missing crossing {e.crossing}", b.id)
                        continue
                    if e.role not in (OVER, UNDER):
                        rep.add("cross-role", f"band {b.id} event {i} role {e.role}", b.id)
                    elif after != before:
                        # a ribbon crossing changes the label only inside the
                        # crossing region (the double conjugation under the two
                        # boundary arcs of the over band cancels), so segment
                        # labels pass through crossings unchanged
                        rep.add("cross-label",
                                f"band {b.id} event {i}: crossings preserve segment labels", b.id)
                else:
                    rep.add("event", f"band {b.id} event {i} has unknown type", b.id)
        pass_keys = set()
        for b in self.bands.values():
            for e in b.events:
                if isinstance(e, Pass):
                    key = (e.disk, e.slot)
                    if key in pass_keys:
                        rep.add("pass-slot-reuse", f"pass slot {key} used twice", e.disk)
                    pass_keys.add(key)
        for cid, c in self.crossings.items():
            visits = self.crossing_visits(cid)
            roles = sorted(v[2] for v in visits)
            if len(visits) != 2 or roles != [OVER, UNDER]:
                rep.add("crossing-visits",
                        f"crossing {cid} referenced {len(visits)} times with roles {roles}", cid)
            if c.sign not in (1, -1):
                rep.add("crossing-sign", f"crossing {cid} has sign {c.sign}", cid)
        return rep

    # --------------------------------------------------------- invariants

    def euler_characteristic(self) -> int:
        return len(self.disks) - len(self.bands)

    def covering_component_count(self) -> int:
        return orbit_count(self.all_labels(), self.degree)

    def is_orientable(self) -> bool:
        """Propagate disk side-orientations across bands; twisted bands flip."""
        ids = sorted(self.disks)
        index = {d: i for i, d in enumerate(ids)}
        parent = list(range(len(ids)))
        parity = [0] * len(ids)  # parity relative to the union-find root

        def find(x):
            if parent[x] == x:
                return x, 0
            root, p = find(parent[x])
            parent[x] = root
            parity[x] ^= p
            return root, parity[x]

        for b in self.bands.values():
            twist = sum(1 for e in b.events if isinstance(e, HalfTwist)) % 2
            a, s = b.ends[0][0], b.ends[1][0]
            ra, pa = find(index[a])
            rb, pb = find(index[s])
            if ra == rb:
                if (pa ^ pb) != twist:
                    return False
            else:
                parent[ra] = rb
                parity[ra] = pa ^ pb ^ twist
        return True

    # ----------------------------------------------------- stabilization

    def stabilize(self, i: int) -> "RibbonDiagram":
        if not (1 <= i <= self.degree):
            raise ValueError(f"stabilizing sheet {i} out of range for degree {self.degree}")
        out = self.copy()
        out.degree = self.degree + 1
        did = out.fresh_id("d")
        out.disks[did] = Disk(id=did, label=Transposition(i, self.degree + 1), role="stab")
        return out

    def destabilize(self) -> "RibbonDiagram":
        d = self.degree
        candidates = []
        for disk in self.sorted_disks():
            if disk.label.j != d:
                continue
            if self.attachments(disk.id) or self.passes_through(disk.id):
                continue
            others = [lab for lab in self.all_labels()]
            uses = sum(1 for lab in others if d in lab.pair)
            if uses == 1:
                candidates.append(disk)
        if not candidates:
            raise ValueError("no destabilizing disk: need a separate disk (i d) with sheet d otherwise unused")
        out = self.copy()
        del out.disks[candidates[0].id]
        out.degree = d - 1
        return out

    # ------------------------------------------------------ serialization

    def to_payload(self) -> dict:
        def ev(e):
            if isinstance(e, HalfTwist):
                return {"t": "twist", "sign": e.sign}
            if isinstance(e, Pass):
                return {"t": "pass", "disk": e.disk, "side": e.side, "slot": e.slot}
            if isinstance(e, Cross):
                return {"t": "cross", "id": e.crossing, "role": e.role}
            raise TypeError(e)

        return {
            "degree": self.degree,
            "disks": [
                {"id": d.id, "label": list(d.label.pair), "role": d.role, "gap": d.gap}
                for d in self.sorted_disks()
            ],
            "bands": [
                {
                    "id": b.id,
                    "ends": [list(b.ends[0]), list(b.ends[1])],
                    "events": [ev(e) for e in b.events],
                    "labels": [list(l.pair) for l in b.labels],
                }
                for b in self.sorted_bands()
            ],
            "crossings": [
                {"id": c.id, "sign": c.sign} for c in (self.crossings[k] for k in sorted(self.crossings, key=id_key))
            ],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "RibbonDiagram":
        def ev(d):
            t = d["t"]
            if t == "twist":
                return HalfTwist(d["sign"])
            if t == "pass":
                return Pass(d["disk"], d["side"], d["slot"])
            if t == "cross":
                return Cross(d["id"], d["role"])
            raise ValueError(f"unknown event type {t!r}")

        disks = [Disk(d["id"], Transposition(*d["label"]), d.get("role", ""), d.get("gap", 0))
                 for d in payload["disks"]]
        bands = [
            Band(
                b["id"],
                (tuple(b["ends"][0]), tuple(b["ends"][1])),
                [ev(e) for e in b["events"]],
                [Transposition(*l) for l in b["labels"]],
            )
            for b in payload["bands"]
        ]
        crossings = [RCrossing(c["id"], c["sign"]) for c in payload["crossings"]]
        return cls(payload["degree"], disks, bands, crossings)

    # ------------------------------------------------------------ equality

    def canonical_payload(self) -> dict:
        """Payload with ids renumbered by a canonical traversal.

        Disks and bands are densified in id order; crossings are renumbered
        in order of first visit along the sorted bands. Diagram equality in
        move round-trip tests means equality of canonical payloads.
        """
        disk_map = {d: f"d{i}" for i, d in enumerate(sorted(self.disks, key=id_key))}
        band_map = {b: f"b{i}" for i, b in enumerate(sorted(self.bands, key=id_key))}
        cross_map: Dict[str, str] = {}
        for b in self.sorted_bands():
            for e in b.events:
                if isinstance(e, Cross) and e.crossing not in cross_map:
                    cross_map[e.crossing] = f"c{len(cross_map)}"
        payload = self.to_payload()
        for d in payload["disks"]:
            d["id"] = disk_map[d["id"]]
            d["role"] = ""  # provenance text is not part of diagram identity
        for b in payload["bands"]:
            b["id"] = band_map[b["id"]]
            b["ends"] = [[disk_map[b["ends"][0][0]], b["ends"][0][1]], [disk_map[b["ends"][1][0]], b["ends"][1][1]]]
            for e in b["events"]:
                if e["t"] == "pass":
                    e["disk"] = disk_map[e["disk"]]
                elif e["t"] == "cross":
                    e["id"] = cross_map[e["id"]]
        payload["crossings"] = sorted(
            ({"id": cross_map[c["id"]], "sign": c["sign"]} for c in payload["crossings"]),
            key=lambda c: id_key(c["id"]),
        )
        payload["disks"].sort(key=lambda d: id_key(d["id"]))
        payload["bands"].sort(key=lambda b: id_key(b["id"]))
        return payload

    def equivalent_code(self, other: "RibbonDiagram") -> bool:
        return self.canonical_payload() == other.canonical_payload()
