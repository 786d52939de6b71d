"""Seeded pseudo-random diagram corpora for property sweeps.

Generation is valid-by-construction: segment labels are propagated forward
through each band's events and the closing disk is chosen (or created) to
match the final label.
"""

from __future__ import annotations

import random
from typing import List, Optional

from .kirby import (
    DottedComponent,
    FramedComponent,
    GeneralizedKirbyDiagram,
    KCross,
    KCrossing,
    Pierce,
)
from .permutation import Transposition, conjugate
from .ribbon import (
    BACK,
    Band,
    Cross,
    Disk,
    FRONT,
    HalfTwist,
    Pass,
    RCrossing,
    RibbonDiagram,
)


def _random_transposition(rng: random.Random, d: int) -> Transposition:
    i = rng.randint(1, d - 1)
    j = rng.randint(i + 1, d)
    return Transposition(i, j)


def random_ribbon_diagram(seed: int, max_degree: int = 6, max_disks: int = 8,
                          max_bands: int = 12) -> RibbonDiagram:
    rng = random.Random(seed)
    d = rng.randint(2, max_degree)
    f = RibbonDiagram(degree=d)
    n_disks = rng.randint(1, max_disks)
    for i in range(n_disks):
        f.disks[f"d{i}"] = Disk(f"d{i}", _random_transposition(rng, d))
    end_slots = {did: -1 for did in f.disks}
    pass_slots = {did: -1 for did in f.disks}

    def next_end(did):
        end_slots[did] += 1
        return end_slots[did]

    def next_pass(did):
        pass_slots[did] += 1
        return pass_slots[did]

    n_bands = rng.randint(0, max_bands)
    band_list: List[Band] = []
    xn = 0
    for bi in range(n_bands):
        start = rng.choice(sorted(f.disks))
        label = f.disks[start].label
        events = []
        labels = [label]
        for _ in range(rng.randint(0, 4)):
            kind = rng.random()
            if kind < 0.35:
                events.append(HalfTwist(rng.choice((1, -1))))
                labels.append(labels[-1])
            elif kind < 0.75:
                target = rng.choice(sorted(f.disks))
                side = rng.choice((FRONT, BACK))
                events.append(Pass(target, side, next_pass(target)))
                labels.append(conjugate(labels[-1], f.disks[target].label))
            elif band_list:
                # crossing under an earlier, already finished band
                other = rng.choice(band_list)
                cid = f"c{xn}"
                xn += 1
                f.crossings[cid] = RCrossing(cid, rng.choice((1, -1)))
                pos = rng.randint(0, len(other.events))
                other.events.insert(pos, Cross(cid, "over"))
                other.labels.insert(pos + 1, other.labels[pos])
                events.append(Cross(cid, "under"))
                labels.append(labels[-1])
        final = labels[-1]
        targets = [did for did, disk in f.disks.items() if disk.label == final]
        if targets:
            end_disk = rng.choice(sorted(targets))
        elif len(f.disks) < max_disks:
            end_disk = f"d{len(f.disks)}"
            f.disks[end_disk] = Disk(end_disk, final)
            end_slots[end_disk] = -1
            pass_slots[end_disk] = -1
        else:
            continue  # drop the band rather than break the label rules
        band = Band(f"b{bi}", ((start, next_end(start)), (end_disk, next_end(end_disk))),
                    events, labels)
        f.bands[band.id] = band
        band_list.append(band)
    return f


def ribbon_corpus(count: int, seed: int = 20240810, **kw) -> List[RibbonDiagram]:
    out = []
    n = 0
    while len(out) < count:
        f = random_ribbon_diagram(seed + n, **kw)
        n += 1
        if f.validate().ok:
            out.append(f)
    return out


def random_gkd(seed: int, max_zero: int = 4, max_dotted: int = 5,
               max_framed: int = 6, connected: bool = False) -> GeneralizedKirbyDiagram:
    rng = random.Random(seed)
    d0 = rng.randint(1, max_zero)
    k = GeneralizedKirbyDiagram(zero_handles=d0)
    n_dotted = rng.randint(0, max_dotted)
    for i in range(n_dotted):
        a = rng.randint(1, d0)
        b = rng.randint(1, d0)
        k.dotted[f"u{i}"] = DottedComponent(f"u{i}", (a, b))
    if connected and d0 > 1:
        # chain the 0-handles so reduction applies
        for h in range(2, d0 + 1):
            uid = f"uc{h}"
            k.dotted[uid] = DottedComponent(uid, (h - 1, h))
    n_framed = rng.randint(0, max_framed)
    for i in range(n_framed):
        base = rng.randint(1, d0)
        events, labels = [], []
        cur = base
        for _ in range(rng.randint(0, 5)):
            choices = [u for u in sorted(k.dotted) if cur in k.dotted[u].sides]
            if not choices or rng.random() < 0.3:
                continue
            uid = rng.choice(choices)
            sides = k.dotted[uid].sides
            enter = sides.index(cur)
            events.append(Pierce(uid, enter))
            cur = sides[1 - enter]
            labels.append(cur)
        # close the walk: retrace the piercings backwards
        if cur != base:
            for e in list(reversed(events)):
                sides = k.dotted[e.dotted].sides
                enter = sides.index(cur)
                events.append(Pierce(e.dotted, enter))
                cur = sides[1 - enter]
                labels.append(cur)
                if cur == base:
                    break
        if cur != base:
            events, labels = [], []
        if not events:
            labels = [base]
        k.framed[f"k{i}"] = FramedComponent(f"k{i}", events, labels, 2 * rng.randint(-3, 3))
    # sprinkle crossings anywhere (labels are unchanged by crossings)
    fids = sorted(k.framed)
    xn = 0
    if fids:
        for _ in range(rng.randint(0, 6)):
            fa, fb = rng.choice(fids), rng.choice(fids)
            ca, cb = k.framed[fa], k.framed[fb]
            pa = rng.randint(0, len(ca.events))
            cid = f"x{xn}"
            xn += 1
            k.crossings[cid] = KCrossing(cid, rng.choice((1, -1)))
            ca.events.insert(pa, KCross(cid, "over"))
            ca.labels.insert(pa, ca.labels[pa - 1] if pa > 0 else ca.labels[-1])
            pb = rng.randint(0, len(cb.events))
            cb.events.insert(pb, KCross(cid, "under"))
            cb.labels.insert(pb, cb.labels[pb - 1] if pb > 0 else cb.labels[-1])
    return k


def gkd_corpus(count: int, seed: int = 777, connected: bool = False, **kw):
    out = []
    n = 0
    while len(out) < count:
        k = random_gkd(seed + n, connected=connected, **kw)
        n += 1
        if not k.validate().ok:
            continue
        if connected and k.component_count() != 1:
            continue
        out.append(k)
    return out
