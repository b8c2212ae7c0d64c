"""Finite covers of a rose (one loop per generator) and loop decomposition.

A homomorphism from a presented group onto a finite permutation group, plus
a subgroup H of the target, determines a cover whose vertices are the right
cosets of H.  A loop (cyclic word) lifts to a disjoint union of closed
paths; the multiset of their lengths, divided by the loop length, is the
loop's decomposition type.  ``verify_artin`` checks by explicit trace that
this always equals the cycle type of the loop's image in the coset action,
and ``verify_component_bijection`` checks that degree-1 components are
exactly the conjugates of the image that land in H.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .freewords import CyclicWord, GroupHom, Presentation, Word, cyclic_reduce, evaluate, format_letters
from .permgroup import (CosetAction, FiniteGroup, Subgroup, class_index,
                        conjugacy_classes, coset_action, cycle_type)


@dataclass(frozen=True, eq=False)
class CoveringGraph:
    """A cover of the rose, realized on coset labels.

    Vertex 0 is the subgroup H itself (the basepoint fiber over the wedge
    point contains it); ``steps[k-1][v]`` moves vertex v along the monodromy
    of generator x_k (the coset map Hx -> H x g_k^{-1}), and ``steps_inv``
    is the inverse walk.
    """

    generator_count: int
    vertex_count: int
    steps: tuple[tuple[int, ...], ...]
    steps_inv: tuple[tuple[int, ...], ...]
    hom: GroupHom
    subgroup: Subgroup
    action: CosetAction


def build_cover(hom: GroupHom, h: Subgroup) -> CoveringGraph:
    """Covering graph of the rose determined by ``hom`` and the subgroup ``h``."""
    g = hom.target
    if h.group is not g:
        raise ValueError("subgroup belongs to a different group than the hom's target")
    act = coset_action(g, h)
    steps = []
    steps_inv = []
    for img in hom.images:
        p = act.image(img)
        steps.append(p.images)
        steps_inv.append(p.inverse().images)
    return CoveringGraph(
        generator_count=len(hom.images),
        vertex_count=act.degree,
        steps=tuple(steps),
        steps_inv=tuple(steps_inv),
        hom=hom,
        subgroup=h,
        action=act,
    )


class Component(NamedTuple):
    vertices: frozenset
    degree: int


@dataclass(frozen=True)
class LiftResult:
    """Connected components of a lifted loop, ordered by least vertex."""

    components: tuple[Component, ...]
    decomposition_type: tuple[int, ...]


def decompose_loop(cover: CoveringGraph, w: CyclicWord | Word) -> LiftResult:
    """Lift the loop from every vertex and collect the closed components.

    A plain Word is cyclically reduced first, so everything is computed from
    the canonical rotation: the decomposition type is an invariant of the
    loop's conjugacy class, while the component vertex sets are the
    monodromy orbits of the canonical rotation specifically (a different
    rotation would permute the fiber by a conjugate).  The trace walks the
    letters in reverse order, so that one full block of |w| steps moves a
    vertex by the monodromy of the image element (the step maps compose
    right-to-left, like everything else in this package).
    """
    if isinstance(w, Word):
        w = cyclic_reduce(w)
    if not w.letters:
        raise ValueError("the empty loop has no decomposition type")
    for l in w.letters:
        if abs(l) > cover.generator_count:
            raise ValueError(f"letter {l} outside x1..x{cover.generator_count}")
    rev = tuple(reversed(w.letters))
    steps, steps_inv = cover.steps, cover.steps_inv
    visited = [False] * cover.vertex_count
    comps = []
    for v0 in range(cover.vertex_count):
        if visited[v0]:
            continue
        visited[v0] = True
        fiber = [v0]
        u = v0
        while True:
            for l in rev:
                u = steps[l - 1][u] if l > 0 else steps_inv[-l - 1][u]
            if u == v0:
                break
            visited[u] = True
            fiber.append(u)
        comps.append(Component(frozenset(fiber), len(fiber)))
    dtype = tuple(sorted((c.degree for c in comps), reverse=True))
    return LiftResult(tuple(comps), dtype)


def _loop_word_for(g: FiniteGroup, z: int) -> Optional[CyclicWord]:
    """A nonempty cyclic word over g's generators evaluating to a conjugate of z.

    Uses the shortest word recorded during group generation (positive letters
    only, hence already cyclically reduced); the identity falls back to the
    first generator raised to its order.  None only for the trivial group.
    """
    letters = g.word_for(z)
    if not letters:
        if not g.generators:
            return None
        k = g.generators[0]
        m = 1
        x = k
        while x != g.identity:
            x = g.mul(x, k)
            m += 1
        letters = (1,) * m
    return cyclic_reduce(Word(letters))


@dataclass(frozen=True)
class ArtinMismatch:
    element: int
    word: str
    expected: tuple[int, ...]
    traced: tuple[int, ...]


@dataclass(frozen=True)
class ArtinReport:
    group_order: int
    subgroup_order: int
    index: int
    checked: int
    mismatches: tuple[ArtinMismatch, ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def verify_artin(g: FiniteGroup, h: Subgroup) -> ArtinReport:
    """Trace every element's loop through the cover of g/h and compare its
    decomposition type against the cycle type of the coset-action image."""
    pres = Presentation(len(g.generators), ())
    hom = GroupHom(pres, g, g.generators)
    cover = build_cover(hom, h)
    act = cover.action
    mismatches = []
    for z in range(g.order):
        expected = cycle_type(act.image(z))
        w = _loop_word_for(g, z)
        if w is None:
            # trivial group: the constant loop closes over the single vertex
            traced = (1,) * cover.vertex_count
        else:
            traced = decompose_loop(cover, w).decomposition_type
        if traced != expected:
            word_str = format_letters(w.letters) if w is not None else ""
            mismatches.append(ArtinMismatch(z, word_str, expected, traced))
    return ArtinReport(
        group_order=g.order,
        subgroup_order=len(h),
        index=h.index,
        checked=g.order,
        mismatches=tuple(mismatches),
    )


@dataclass(frozen=True)
class ComponentCheck:
    """Holonomy data for one degree-1 component of a lifted loop."""

    vertex: int
    holonomy: int        # rep_v * z * rep_v^{-1}
    in_subgroup: bool
    in_class: bool


@dataclass(frozen=True)
class BijectionReport:
    """Both directions of the degree-1 component criterion for one loop."""

    word: CyclicWord
    image: int
    decomposition_type: tuple[int, ...]
    degree_one_checks: tuple[ComponentCheck, ...]
    class_meets_subgroup: bool
    conjugator: Optional[int]
    direction1_ok: bool  # each degree-1 component's holonomy is in H and conjugate to z
    direction2_ok: bool  # some conjugate of z in H  =>  a degree-1 component exists

    @property
    def passed(self) -> bool:
        return self.direction1_ok and self.direction2_ok


def verify_component_bijection(cover: CoveringGraph, w: CyclicWord | Word) -> BijectionReport:
    """Check that degree-1 components of the lift carry conjugates of the
    loop's image into the subgroup, and that such a conjugate forces one."""
    if isinstance(w, Word):
        w = cyclic_reduce(w)
    g = cover.hom.target
    h = cover.subgroup
    act = cover.action
    z = evaluate(cover.hom, w)
    lift = decompose_loop(cover, w)
    cls = conjugacy_classes(g)[class_index(g, z)].members
    checks = []
    dir1 = True
    for comp in lift.components:
        if comp.degree != 1:
            continue
        v = min(comp.vertices)
        r = act.reps[v]
        hol = g.mul(g.mul(r, z), g.inv(r))
        ok_h = hol in h.members
        ok_c = hol in cls
        dir1 = dir1 and ok_h and ok_c
        checks.append(ComponentCheck(v, hol, ok_h, ok_c))
    conjugator = None
    for c in range(g.order):
        if g.mul(g.mul(c, z), g.inv(c)) in h.members:
            conjugator = c
            break
    dir2 = conjugator is None or bool(checks)
    return BijectionReport(
        word=w,
        image=z,
        decomposition_type=lift.decomposition_type,
        degree_one_checks=tuple(checks),
        class_meets_subgroup=conjugator is not None,
        conjugator=conjugator,
        direction1_ok=dir1,
        direction2_ok=dir2,
    )
