"""Finite permutation groups: closure, conjugacy classes, coset actions.

Conventions, fixed once and used everywhere downstream:

* composition applies the right factor first: compose(a, b)(x) == a(b(x));
* group elements are kept sorted lexicographically by their image tuples,
  which puts the identity at index 0;
* the action on right cosets of a subgroup H sends Hx to H x z^{-1} (the
  inversion is what makes a *right* coset space carry a left action), and
  cosets are labeled breadth-first from H along the edges v -> v.g^{-1},
  generators taken in input order.
"""

from __future__ import annotations

import json
import re
from typing import Iterable, NamedTuple, Sequence

GENERATION_CAP = 10080

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A permutation of {0, ..., n-1} stored as its tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images!r}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based cycles, e.g. [(0, 1, 2)] for the 1-based (1 2 3)."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for p in cyc:
                if not 0 <= p < degree:
                    raise ValueError(f"point {p} outside 0..{degree - 1}")
                if p in seen:
                    raise ValueError(f"point {p} repeated across cycles")
                seen.add(p)
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse 1-based cycle notation: "(1 2 3)(4 5)"; "()" is the identity."""
        s = text.strip().replace(",", " ")
        if s in ("", "()"):
            return cls.identity(degree)
        if _CYCLE_RE.sub("", s).strip():
            raise ValueError(f"bad cycle notation: {text!r}")
        cycles = []
        for part in _CYCLE_RE.findall(s):
            toks = part.split()
            if toks:
                cycles.append(tuple(int(t) - 1 for t in toks))
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-based, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            seen[start] = True
            if self.images[start] == start:
                continue
            cyc = [start]
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation.parse({self.cycle_string()!r}, {self.degree})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """compose(a, b) applies b first: compose(a, b)(x) == a(b(x))."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    ia = a.images
    return Permutation(ia[x] for x in b.images)


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths in decreasing order, fixed points included as 1s."""
    seen = [False] * p.degree
    lens = []
    for start in range(p.degree):
        if seen[start]:
            continue
        n = 0
        x = start
        while not seen[x]:
            seen[x] = True
            n += 1
            x = p.images[x]
        lens.append(n)
    return tuple(sorted(lens, reverse=True))


class FiniteGroup:
    """A permutation group closed under composition, with canonical labels.

    Elements are indexed 0..order-1 in lexicographic order of their image
    tuples (identity first).  ``word_for(i)`` returns a shortest word in the
    generators (1-based positive letters) evaluating to element i, recorded
    during the generating closure; the identity's word is empty.
    """

    def __init__(self, degree, elements, generator_perms, words):
        self.degree = degree
        self.elements = tuple(elements)
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.generators = tuple(self.index[g] for g in generator_perms)
        self._words = tuple(tuple(w) for w in words)
        self.identity = self.index[Permutation.identity(degree)]
        self._mul = None
        self._inv = None
        self._classes = None
        self._class_of = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def _mul_table(self):
        if self._mul is None:
            if self.order <= 360:
                idx = self.index
                els = self.elements
                self._mul = [tuple(idx[compose(a, b)] for b in els) for a in els]
            else:
                self._mul = {}
        return self._mul

    def mul(self, i: int, j: int) -> int:
        tbl = self._mul_table()
        if isinstance(tbl, dict):
            r = tbl.get((i, j))
            if r is None:
                r = tbl[(i, j)] = self.index[compose(self.elements[i], self.elements[j])]
            return r
        return tbl[i][j]

    def inv(self, i: int) -> int:
        if self._inv is None:
            self._inv = tuple(self.index[p.inverse()] for p in self.elements)
        return self._inv[i]

    def word_for(self, i: int) -> tuple[int, ...]:
        return self._words[i]

    def __repr__(self) -> str:
        return f"<FiniteGroup of order {self.order} on {self.degree} points>"


def generate_group(generators: Sequence[Permutation], *, degree: int | None = None,
                   cap: int = GENERATION_CAP) -> FiniteGroup:
    """Close a generator list under composition (breadth-first).

    ``degree`` is required when the generator list is empty.  Raises
    ValueError if the closure grows past ``cap``.
    """
    gens = list(generators)
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError("generators act on different numbers of points")
    ident = Permutation.identity(degree)
    words: dict[Permutation, tuple[int, ...]] = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            w = words[p]
            for k, g in enumerate(gens):
                q = compose(p, g)
                if q not in words:
                    if len(words) >= cap:
                        raise ValueError(f"group closure exceeded cap of {cap} elements")
                    words[q] = w + (k + 1,)
                    nxt.append(q)
        frontier = nxt
    elements = sorted(words)
    return FiniteGroup(degree, elements, gens, [words[p] for p in elements])


class ConjugacyClass(NamedTuple):
    representative: int  # least member under the canonical element order
    members: frozenset


def conjugacy_classes(g: FiniteGroup) -> tuple[ConjugacyClass, ...]:
    """All conjugacy classes, sorted by representative index."""
    if g._classes is None:
        unassigned = set(range(g.order))
        classes = []
        class_of = [0] * g.order
        while unassigned:
            start = min(unassigned)
            orbit = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for k in g.generators:
                    y = g.mul(g.mul(k, x), g.inv(k))
                    if y not in orbit:
                        orbit.add(y)
                        stack.append(y)
            for x in orbit:
                class_of[x] = len(classes)
            classes.append(ConjugacyClass(start, frozenset(orbit)))
            unassigned -= orbit
        g._classes = tuple(classes)
        g._class_of = tuple(class_of)
    return g._classes


def class_index(g: FiniteGroup, i: int) -> int:
    """Position of element i's conjugacy class in conjugacy_classes(g)."""
    conjugacy_classes(g)
    return g._class_of[i]


def generated_set(g: FiniteGroup, seed: Iterable[int]) -> frozenset:
    """Element indices of the subgroup generated by ``seed``."""
    members = set(seed)
    members.add(g.identity)
    frontier = list(members)
    while frontier:
        nxt = []
        for x in frontier:
            for y in tuple(members):
                for z in (g.mul(x, y), g.mul(y, x)):
                    if z not in members:
                        members.add(z)
                        nxt.append(z)
        frontier = nxt
    return frozenset(members)


class Subgroup:
    """A validated subgroup, held as a frozenset of element indices."""

    def __init__(self, group: FiniteGroup, members: Iterable[int]):
        members = frozenset(members)
        if group.identity not in members:
            raise ValueError("subgroup must contain the identity")
        for i in members:
            if group.inv(i) not in members:
                raise ValueError("member set not closed under inversion")
            for j in members:
                if group.mul(i, j) not in members:
                    raise ValueError("member set not closed under composition")
        self.group = group
        self.members = members

    @classmethod
    def generated(cls, group: FiniteGroup, indices: Iterable[int]) -> "Subgroup":
        return cls(group, generated_set(group, indices))

    @classmethod
    def point_stabilizer(cls, group: FiniteGroup, point: int) -> "Subgroup":
        """Stabilizer of a 0-based point."""
        if not 0 <= point < group.degree:
            raise ValueError(f"point {point} outside 0..{group.degree - 1}")
        return cls(group, (i for i, p in enumerate(group.elements) if p(point) == point))

    @classmethod
    def whole(cls, group: FiniteGroup) -> "Subgroup":
        return cls(group, range(group.order))

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "Subgroup":
        return cls(group, (group.identity,))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    @property
    def index(self) -> int:
        return self.group.order // len(self.members)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.group is self.group
                and other.members == self.members)

    def __hash__(self) -> int:
        return hash((id(self.group), self.members))

    def __repr__(self) -> str:
        return f"<Subgroup of order {len(self.members)} and index {self.index}>"


def all_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """Every subgroup of g, by closing the cyclic subgroups under join.

    Sorted by (order, sorted member indices); fine for the modest group
    orders this package targets, not for big groups.
    """
    cyclics = set()
    for i in range(g.order):
        powers = {g.identity}
        x = i
        while x != g.identity:
            powers.add(x)
            x = g.mul(x, i)
        cyclics.add(frozenset(powers))
    subs = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        new = set()
        for s in frontier:
            for c in cyclics:
                if c <= s:
                    continue
                t = generated_set(g, s | c)
                if t not in subs:
                    subs.add(t)
                    new.add(t)
        frontier = new
    return [Subgroup(g, ms) for ms in sorted(subs, key=lambda ms: (len(ms), sorted(ms)))]


class CosetAction:
    """The action of a group on the right cosets of a subgroup.

    Coset 0 is H itself; ``reps[j]`` is the first element found in coset j by
    the breadth-first labeling walk, and ``coset_of[i]`` locates element i's
    coset.  ``image(z)`` is the permutation Hx -> H x z^{-1} of coset labels.
    """

    def __init__(self, group: FiniteGroup, subgroup: Subgroup):
        if subgroup.group is not group:
            raise ValueError("subgroup belongs to a different group")
        reps = [group.identity]
        coset_of: list[int | None] = [None] * group.order
        for m in subgroup.members:
            coset_of[m] = 0
        frontier = [group.identity]
        while frontier:
            nxt = []
            for r in frontier:
                for k in group.generators:
                    t = group.mul(r, group.inv(k))
                    if coset_of[t] is None:
                        c = len(reps)
                        reps.append(t)
                        for m in subgroup.members:
                            coset_of[group.mul(m, t)] = c
                        nxt.append(t)
            frontier = nxt
        if any(c is None for c in coset_of):
            raise ValueError("generators do not generate the group")
        self.group = group
        self.subgroup = subgroup
        self.reps = tuple(reps)
        self.coset_of = tuple(coset_of)

    @property
    def degree(self) -> int:
        return len(self.reps)

    def image(self, z: int) -> Permutation:
        zi = self.group.inv(z)
        co = self.coset_of
        mul = self.group.mul
        return Permutation(co[mul(r, zi)] for r in self.reps)

    def kernel(self) -> frozenset:
        """Elements acting trivially on every coset."""
        return frozenset(z for z in range(self.group.order) if self.image(z).is_identity())

    def image_group(self) -> FiniteGroup:
        gens = [self.image(k) for k in self.group.generators]
        return generate_group(gens, degree=self.degree)


def coset_action(g: FiniteGroup, h: Subgroup) -> CosetAction:
    return CosetAction(g, h)


def parse_group_data(data: dict) -> FiniteGroup:
    degree = int(data["degree"])
    if degree < 1:
        raise ValueError("degree must be at least 1")
    gens = [Permutation.parse(s, degree) for s in data["generators"]]
    return generate_group(gens, degree=degree)


def load_group_file(path) -> FiniteGroup:
    """Read a group file: {"degree": n, "generators": ["(1 2 3)", ...]}."""
    with open(path) as fh:
        return parse_group_data(json.load(fh))


def group_file_data(g: FiniteGroup) -> dict:
    return {
        "degree": g.degree,
        "generators": [g.elements[k].cycle_string() for k in g.generators],
    }
