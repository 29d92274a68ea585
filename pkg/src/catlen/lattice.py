"""Finite posets, finite lattices, maximal chains and length reports.

The lattice of down-sets of a finite poset models the specialization-closed
subsets of a finite T0 space, hence the thick-subcategory lattices of perfect
complexes over rings with finite spectrum and of singularity categories with
finitely many singular points (both classifications enter reports as cited
claims, never recomputed).

Composition series are maximal chains of covering steps from bottom to top;
the length spectrum is the set of their lengths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InternalInconsistencyError, PosetTooLargeError, ValidationError

VERIFIED = "VERIFIED"
PAPER_ASSERTED = "PAPER-ASSERTED"

HOLDS = "HOLDS"
FAILS = "FAILS"
UNKNOWN = "UNKNOWN"

EXACT = "EXACT"
WITNESSED = "WITNESSED"

DEFAULT_MAX_POSET = 12


@dataclass(frozen=True)
class Claim:
    statement: str
    provenance: str  # VERIFIED | PAPER-ASSERTED
    citation: str = ""

    def to_json(self):
        return {
            "statement": self.statement,
            "provenance": self.provenance,
            "citation": self.citation,
        }


@dataclass(frozen=True)
class LengthReport:
    exactness: str  # EXACT | WITNESSED
    length: int
    ultimate_length: int
    spectrum: tuple  # sorted tuple of witnessed/exact chain lengths
    jd_index: int
    jd_property: str  # HOLDS | FAILS | UNKNOWN
    claims: tuple = ()

    def __post_init__(self):
        spec = tuple(sorted(set(self.spectrum)))
        object.__setattr__(self, "spectrum", spec)
        if not spec:
            raise ValidationError("empty spectrum in length report")
        if self.length != spec[0] or self.ultimate_length != spec[-1]:
            raise InternalInconsistencyError("length fields disagree with spectrum")
        if self.jd_index != self.ultimate_length - self.length:
            raise InternalInconsistencyError("jd_index != ultimate_length - length")
        if self.exactness == EXACT:
            if len(spec) > 1 and self.jd_property != FAILS:
                raise InternalInconsistencyError("exact multi-valued spectrum must FAIL JD")
            if len(spec) == 1 and self.jd_property == FAILS:
                raise InternalInconsistencyError("exact singleton spectrum cannot FAIL JD")

    def to_json(self):
        return {
            "exactness": self.exactness,
            "length": self.length,
            "ultimate_length": self.ultimate_length,
            "spectrum": list(self.spectrum),
            "jd_index": self.jd_index,
            "jd_property": self.jd_property,
            "claims": [c.to_json() for c in self.claims],
        }


def make_report(spectrum, exactness, claims=(), jd_property=None):
    spec = tuple(sorted(set(spectrum)))
    if jd_property is None:
        if len(spec) > 1:
            jd_property = FAILS
        else:
            jd_property = HOLDS if exactness == EXACT else UNKNOWN
    return LengthReport(
        exactness=exactness,
        length=spec[0],
        ultimate_length=spec[-1],
        spectrum=spec,
        jd_index=spec[-1] - spec[0],
        jd_property=jd_property,
        claims=tuple(claims),
    )


class FinPoset:
    """Finite strict poset; the relation is transitively closed on build."""

    def __init__(self, elements, lt):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise ValidationError("duplicate poset elements")
        self.elements = elements
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        below = [0] * n  # bitmask: below[i] has bit j set iff elements[j] < elements[i]
        for a, b in lt:
            if a not in index or b not in index:
                raise ValidationError(f"relation ({a!r}, {b!r}) uses unknown element")
            below[index[b]] |= 1 << index[a]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = below[i]
                m = below[i]
                j = 0
                while m:
                    if m & 1:
                        acc |= below[j]
                    m >>= 1
                    j += 1
                if acc != below[i]:
                    below[i] = acc
                    changed = True
        for i in range(n):
            if below[i] >> i & 1:
                raise ValidationError("poset relation contains a cycle")
        self._below = tuple(below)
        self._index = index

    def __len__(self):
        return len(self.elements)

    def lt(self, a, b):
        return self._below[self._index[b]] >> self._index[a] & 1 == 1

    def pairs(self):
        out = []
        for b in self.elements:
            for a in self.elements:
                if self.lt(a, b):
                    out.append((a, b))
        return out

    def relabeled(self, mapping):
        return FinPoset([mapping[e] for e in self.elements],
                        [(mapping[a], mapping[b]) for a, b in self.pairs()])

    def canonical_key(self):
        """Isomorphism invariant: minimum relation encoding over all relabelings."""
        n = len(self.elements)
        best = None
        for perm in itertools.permutations(range(n)):
            rel = []
            for i in range(n):
                for j in range(n):
                    if self._below[j] >> i & 1:
                        rel.append((perm[i], perm[j]))
            key = tuple(sorted(rel))
            if best is None or key < best:
                best = key
        return (n, best)

    @classmethod
    def antichain(cls, n):
        return cls(list(range(n)), [])

    @classmethod
    def chain(cls, n):
        return cls(list(range(n)), [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def from_json(cls, doc):
        try:
            elements = doc["elements"]
            lt = [tuple(p) for p in doc.get("lt", [])]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad poset document: {exc}") from exc
        hashable = [tuple(e) if isinstance(e, list) else e for e in elements]
        return cls(hashable, [tuple(tuple(x) if isinstance(x, list) else x for x in p) for p in lt])


@dataclass(frozen=True)
class NodeLabel:
    kind: str  # downset | semibrick | divisor-support | opaque | product
    payload: tuple

    def sort_key(self):
        return (len(self.payload), _canon(self.payload), self.kind)

    def to_json(self):
        return {"kind": self.kind, "payload": _jsonable(self.payload)}


def _canon(x):
    if isinstance(x, tuple):
        return tuple(_canon(y) for y in x)
    return (type(x).__name__, repr(x))


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


class FinLattice:
    """Finite lattice given by nodes and Hasse (covering) edges.

    Structural soundness (unique bottom/top, acyclic covers, no transitively
    implied Hasse edge) is always checked.  The all-pairs join/meet existence
    check is quadratic-ish and runs only up to `join_check_limit` nodes; the
    large lattices built here are down-set lattices and direct products, which
    are lattices by construction.
    """

    def __init__(self, nodes, hasse_edges, bottom, top, join_check_limit=300):
        nodes = sorted(nodes, key=lambda nl: nl.sort_key())
        if len(set(nodes)) != len(nodes):
            raise ValidationError("duplicate node labels")
        self.nodes = tuple(nodes)
        self._idx = {nl: i for i, nl in enumerate(nodes)}
        if bottom not in self._idx or top not in self._idx:
            raise ValidationError("bottom/top not among nodes")
        self.bottom = bottom
        self.top = top
        n = len(nodes)
        up_cover = [[] for _ in range(n)]  # covers above node i
        dn_cover = [[] for _ in range(n)]
        edges = set()
        for lo, hi in hasse_edges:
            i, j = self._idx[lo], self._idx[hi]
            if (i, j) in edges:
                continue
            edges.add((i, j))
            up_cover[i].append(j)
            dn_cover[j].append(i)
        self._up_cover = tuple(tuple(sorted(c)) for c in up_cover)
        self._dn_cover = tuple(tuple(sorted(c)) for c in dn_cover)
        # reachability (strictly above) via DFS over covers
        above = [0] * n
        order = self._topo_order()
        for i in reversed(order):
            acc = 0
            for j in self._up_cover[i]:
                acc |= 1 << j
                acc |= above[j]
            above[i] = acc
        self._above = tuple(above)
        for i in range(n):
            if above[i] >> i & 1:
                raise ValidationError("Hasse edges contain a cycle")
        bi, ti = self._idx[bottom], self._idx[top]
        for i in range(n):
            if i != bi and not (above[bi] >> i & 1):
                raise ValidationError("bottom is not below every node")
            if i != ti and not (above[i] >> ti & 1):
                raise ValidationError("top is not above every node")
        for i, j in edges:
            # a transitively implied edge i<j has another path i -> k -> ... -> j
            for k in self._up_cover[i]:
                if k != j and (self._above[k] >> j & 1):
                    raise ValidationError("transitively implied Hasse edge present")
        if n <= join_check_limit:
            self._check_joins_meets()

    def _topo_order(self):
        n = len(self.nodes)
        indeg = [0] * n
        for i in range(n):
            for j in self._up_cover[i]:
                indeg[j] += 1
        stack = [i for i in range(n) if indeg[i] == 0]
        order = []
        while stack:
            i = stack.pop()
            order.append(i)
            for j in self._up_cover[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        if len(order) != n:
            raise ValidationError("Hasse edges contain a cycle")
        return order

    def _check_joins_meets(self):
        n = len(self.nodes)
        ups = [self._above[i] | (1 << i) for i in range(n)]
        downs = [0] * n
        for i in range(n):
            m = self._above[i]
            j = 0
            while m:
                if m & 1:
                    downs[j] |= 1 << i
                m >>= 1
                j += 1
        for i in range(n):
            downs[i] |= 1 << i
        for i in range(n):
            for j in range(i + 1, n):
                for sets in (ups, downs):
                    common = sets[i] & sets[j]
                    # the extremum, if any, is the member whose cone equals common
                    found = False
                    m = common
                    k = 0
                    while m:
                        if m & 1 and sets[k] == common:
                            found = True
                            break
                        m >>= 1
                        k += 1
                    if not found:
                        raise ValidationError("node pair without join or meet")

    def __len__(self):
        return len(self.nodes)

    def index(self, label):
        return self._idx[label]

    def leq(self, a, b):
        i, j = self._idx[a], self._idx[b]
        return i == j or (self._above[i] >> j & 1) == 1

    def covers_above(self, label):
        return tuple(self.nodes[j] for j in self._up_cover[self._idx[label]])

    def hasse_pairs(self):
        out = []
        for i, node in enumerate(self.nodes):
            for j in self._up_cover[i]:
                out.append((node, self.nodes[j]))
        return sorted(out, key=lambda p: (p[0].sort_key(), p[1].sort_key()))

    def to_json(self):
        return {
            "nodes": [nl.to_json() for nl in self.nodes],
            "hasse_edges": [[a.to_json(), b.to_json()] for a, b in self.hasse_pairs()],
            "bottom": self.bottom.to_json(),
            "top": self.top.to_json(),
        }


def downset_lattice(poset, max_elements=DEFAULT_MAX_POSET):
    """Lattice of down-closed subsets; covers add exactly one element."""
    n = len(poset)
    if n > max_elements:
        raise PosetTooLargeError(
            f"poset has {n} elements, cap is {max_elements} (2^n nodes)"
        )
    elems = poset.elements
    below = poset._below
    downsets = []
    for mask in range(1 << n):
        ok = True
        m = mask
        i = 0
        while m:
            if m & 1 and (below[i] & mask) != below[i]:
                ok = False
                break
            m >>= 1
            i += 1
        if ok:
            downsets.append(mask)
    labels = {}
    for mask in downsets:
        members = tuple(sorted((elems[i] for i in range(n) if mask >> i & 1), key=repr))
        labels[mask] = NodeLabel("downset", members)
    edges = []
    dset = set(downsets)
    for mask in downsets:
        for i in range(n):
            if not mask >> i & 1 and (mask | 1 << i) in dset:
                edges.append((labels[mask], labels[mask | 1 << i]))
    return FinLattice(labels.values(), edges, labels[0], labels[(1 << n) - 1])


def maximal_chains(lat):
    """All bottom-to-top chains of covering steps, lexicographic by labels."""
    out = []
    stack = [(lat.bottom, (lat.bottom,))]
    while stack:
        node, chain = stack.pop()
        if node == lat.top:
            out.append(chain)
            continue
        for nxt in sorted(lat.covers_above(node), key=lambda nl: nl.sort_key(), reverse=True):
            stack.append((nxt, chain + (nxt,)))
    return sorted(out, key=lambda ch: tuple(nl.sort_key() for nl in ch))


def chain_length_spectrum(lat):
    """Set of maximal-chain lengths, by DP over the cover DAG.

    Every maximal chain from bottom ends at top (each non-top node has a
    cover), so the reachable-length sets below give exactly the spectrum
    without enumerating the chains themselves.
    """
    n = len(lat.nodes)
    reach = [None] * n
    reach[lat.index(lat.bottom)] = {0}
    for i in lat._topo_order():
        if reach[i] is None:
            continue
        for j in lat._up_cover[i]:
            if reach[j] is None:
                reach[j] = set()
            reach[j].update(l + 1 for l in reach[i])
    top_reach = reach[lat.index(lat.top)]
    if top_reach is None:
        top_reach = {0} if lat.bottom == lat.top else set()
    if not top_reach:
        raise InternalInconsistencyError("top unreachable from bottom")
    return set(top_reach)


def length_report(lat, extra_claims=()):
    spectrum = chain_length_spectrum(lat)
    claims = [
        Claim(
            f"maximal chains of the {len(lat)}-node lattice have length set {sorted(spectrum)}",
            VERIFIED,
        )
    ]
    claims.extend(extra_claims)
    return make_report(spectrum, EXACT, claims)


def prime_nodes(lat):
    """Nodes whose strict up-set has a minimum (the top is never prime)."""
    out = []
    n = len(lat.nodes)
    for i, node in enumerate(lat.nodes):
        above = lat._above[i]
        if above == 0:
            continue  # top: empty strict up-set has no minimum
        m = above
        k = 0
        found = False
        while m:
            if m & 1 and (lat._above[k] | 1 << k) & above == above:
                found = True
                break
            m >>= 1
            k += 1
        if found:
            out.append(node)
    return set(out)


def maximal_nodes(lat):
    """Coatoms: nodes covered by the top."""
    ti = lat.index(lat.top)
    return {lat.nodes[i] for i in lat._dn_cover[ti]}


def direct_sum(lattices):
    """Product lattice with componentwise order (thick lattice of a direct sum)."""
    lattices = list(lattices)
    if not lattices:
        raise ValidationError("direct_sum needs at least one lattice")
    node_tuples = [(nl,) for nl in lattices[0].nodes]
    for lat in lattices[1:]:
        node_tuples = [t + (nl,) for t in node_tuples for nl in lat.nodes]
    labels = {t: NodeLabel("product", tuple((nl.kind, nl.payload) for nl in t)) for t in node_tuples}
    edges = []
    for t in node_tuples:
        for pos, lat in enumerate(lattices):
            for up in lat.covers_above(t[pos]):
                u = t[:pos] + (up,) + t[pos + 1 :]
                edges.append((labels[t], labels[u]))
    bottom = labels[tuple(l.bottom for l in lattices)]
    top = labels[tuple(l.top for l in lattices)]
    return FinLattice(labels.values(), edges, bottom, top)


def ring_length_report(spec_data, kind="perf", sing_points=None, max_elements=DEFAULT_MAX_POSET):
    """Length report for Perf of a ring with finite spectrum, or for a
    singularity category with finitely many singular points.

    kind="perf": spec_data is a FinPoset (primes under specialization).
    kind="dsg-point-count": spec_data is the number of singular points.
    sing_points (perf only): singular-point count of an artinian hypersurface,
    adding the derived-category companion notes.
    """
    if kind == "perf":
        poset = spec_data
        lat = downset_lattice(poset, max_elements=max_elements)
        n = len(poset)
        claims = [
            Claim(
                f"down-set lattice of the {n}-point spectrum has spectrum {{{n}}}",
                VERIFIED,
            ),
            Claim(
                "thick subcategories of perfect complexes over a noetherian ring "
                "correspond to specialization-closed subsets of the spectrum",
                PAPER_ASSERTED,
                "Neeman's classification (after Hopkins)",
            ),
        ]
        if sing_points is not None:
            m = int(sing_points)
            claims.append(
                Claim(
                    f"the singularity category of the hypersurface has spectrum {{{m}}} "
                    f"({m} singular points)",
                    PAPER_ASSERTED,
                    "Takahashi's classification for hypersurfaces, globalized by Stevenson",
                )
            )
            claims.append(
                Claim(
                    f"the bounded derived category admits a composition series of length {n + m}",
                    PAPER_ASSERTED,
                    "splice of Perf and singularity-category series through the quotient",
                )
            )
            if n == 1 and m == 1:
                claims.append(
                    Claim(
                        "for the local artinian hypersurface (e.g. dual numbers k[x]/<x^2>) "
                        "the bounded derived category has length exactly 2",
                        PAPER_ASSERTED,
                        "one-point spectrum plus non-simplicity of the derived category",
                    )
                )
        return length_report(lat, extra_claims=claims)
    if kind == "dsg-point-count":
        npoints = int(spec_data)
        if npoints < 1:
            raise ValidationError("dsg-point-count needs at least one singular point")
        lat = downset_lattice(FinPoset.antichain(npoints), max_elements=max_elements)
        claims = [
            Claim(
                f"down-set lattice of the {npoints}-point singular locus has spectrum {{{npoints}}}",
                VERIFIED,
            ),
            Claim(
                "thick subcategories of the singularity category of a hypersurface "
                "correspond to specialization-closed subsets of the singular locus",
                PAPER_ASSERTED,
                "Takahashi's classification for hypersurfaces, globalized by Stevenson",
            ),
        ]
        return length_report(lat, extra_claims=claims)
    raise ValidationError(f"unknown ring report kind {kind!r}")
