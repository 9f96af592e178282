"""Looseness, the leaf/gap relation over two glued disks, and induced fixed classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .circle import Chord, CirclePoint, sort_cyclic
from .lamination import Certificate, Lamination, gaps
from .maps import CircleMap


class NotLooseError(ValueError):
    """The two-disk quotient needs loose laminations."""

    def __init__(self, which: int, cert: Certificate):
        super().__init__(f"lamination {which} is not loose: {cert.witness}")
        self.which = which
        self.certificate = cert


class UnionFind:
    def __init__(self, items=()):
        self.parent = {}
        self.rank = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True

    def groups(self) -> list:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def looseness_check(lam: Lamination) -> Certificate:
    """Every point with two or more leaves has all of them on one face boundary."""
    faces = gaps(lam)
    faces_of: dict = {}
    for i, f in enumerate(faces):
        for c in f.chords:
            faces_of.setdefault(c, set()).add(i)
    for p in sort_cyclic(lam.endpoints()):
        inc = lam.incident(p)
        if len(inc) < 2:
            continue
        common = set.intersection(*(faces_of[c] for c in inc))
        if not common:
            # report two incident leaves with no common face
            for i in range(len(inc)):
                for j in range(i + 1, len(inc)):
                    if not faces_of[inc[i]] & faces_of[inc[j]]:
                        return Certificate.refuted({"kind": "not_loose", "point": p,
                                                    "leaves": [inc[i], inc[j]]})
            return Certificate.refuted({"kind": "not_loose", "point": p, "leaves": inc[:2]})
    return Certificate.proven(leaves=len(lam))


@dataclass
class MooreComplex:
    disks: tuple
    classes: list          # lists of points, each cyclically sorted
    class_origin: list     # per class: list of ("leaf", disk, chord) / ("polygon", disk, vertices)
    index: dict = field(default_factory=dict)

    def class_of(self, p: CirclePoint) -> int:
        return self.index[p]

    @property
    def all_finite(self) -> bool:
        return all(len(c) < float("inf") for c in self.classes)


def moore_complex(lam1: Lamination, lam2: Lamination) -> MooreComplex:
    """Classes of the relation generated by leaves and resolved polygons of both disks.

    Faces with a frontier arc are not collapsed, so the relation is an
    approximation from below of the limiting one.
    """
    if lam1.model is not None and lam2.model is not None and lam1.model is not lam2.model:
        raise ValueError("laminations live on different models")
    for i, lam in enumerate((lam1, lam2), 1):
        cert = looseness_check(lam)
        if cert.is_refuted:
            raise NotLooseError(i, cert)
    uf = UnionFind()
    origins: list = []
    for d, lam in enumerate((lam1, lam2)):
        for p in lam.endpoints():
            uf.add(p)
        for c in lam.leaves:
            uf.union(c.a, c.b)
            origins.append((c.a, ("leaf", d, c)))
        for f in gaps(lam):
            if f.is_ideal_polygon:
                vs = f.vertices()
                for v in vs[1:]:
                    uf.union(vs[0], v)
                origins.append((vs[0], ("polygon", d, tuple(vs))))
    groups = [sort_cyclic(g) for g in uf.groups()]
    groups.sort(key=lambda g: g[0].key())
    index = {p: i for i, g in enumerate(groups) for p in g}
    class_origin = [[] for _ in groups]
    for p, o in origins:
        class_origin[index[p]].append(o)
    return MooreComplex((lam1, lam2), groups, class_origin, index)


@dataclass
class FixedClassReport:
    count: Optional[int]
    fixed: list            # class indices
    status: str            # "ok"; "identity" (every class fixed); "unknown" when m moves a leaf out
    detail: str = ""


def _preserves(m: CircleMap, lam: Lamination) -> Optional[Chord]:
    for c in lam.leaves:
        if Chord(m.apply(c.a), m.apply(c.b)) not in lam:
            return c
    return None


def induced_fixed_classes(mc: MooreComplex, m: CircleMap) -> FixedClassReport:
    """Classes ``C`` with ``m(C) = C`` for a map preserving both leaf sets.

    The identity gets a sentinel report listing every class.
    """
    if m.is_identity():
        return FixedClassReport(len(mc.classes), list(range(len(mc.classes))), "identity")
    for d, lam in enumerate(mc.disks):
        bad = _preserves(m, lam)
        if bad is not None:
            return FixedClassReport(None, [], "unknown",
                                    f"leaf {bad} of disk {d} is not mapped into the leaf set")
    fixed = []
    for i, cls in enumerate(mc.classes):
        image = {m.apply(p) for p in cls}
        if image == set(cls):
            fixed.append(i)
    return FixedClassReport(len(fixed), fixed, "ok")


def classes_permuted(mc: MooreComplex, m: CircleMap) -> bool:
    """The induced map sends classes bijectively onto classes."""
    seen = set()
    for cls in mc.classes:
        image = {m.apply(p) for p in cls}
        first = next(iter(image))
        j = mc.index.get(first)
        if j is None or set(mc.classes[j]) != image or j in seen:
            return False
        seen.add(j)
    return len(seen) == len(mc.classes)
