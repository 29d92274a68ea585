"""Finite-dimensional (optionally graded) monomial path algebras.

Paths are stored in travel order (first-traversed arrow first); a path is zero
exactly when it contains a relation as a consecutive subpath.  Modules are
covariant representations; the projective at a vertex is spanned by the paths
leaving it, and a map of projectives P_v -> P_w is a combination of paths
travelling w -> v, acting by left multiplication.

A ProjComplex is a finite free dg module: generators carry a vertex and a
total degree, and for graded algebras the arrow degrees enter the same
grading (the grading of the algebra is its dg grading, differential zero).
Minimal projective resolutions, hom-complex cohomology and bouquet-sphere
detection all run through exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InfiniteDimensionalError,
    InternalInconsistencyError,
    NotMonomialError,
    ValidationError,
    WindowTooSmallError,
)
from .lattice import (
    Claim,
    PAPER_ASSERTED,
    VERIFIED,
    WITNESSED,
    make_report,
)
from .linalg import QQ, CochainComplex, ExactMatrix, intertwiner_basis
from .quiverrep import Quiver

DEFAULT_MAX_PATHS = 10_000
DEFAULT_MAX_RESOLUTION = 64


@dataclass(frozen=True)
class Path:
    """Path in a quiver, travel order; arrows () is the trivial path."""

    source: int
    arrows: tuple

    def __len__(self):
        return len(self.arrows)


@dataclass(frozen=True)
class SphereLikeProfile:
    n: int
    d: int


class MonomialAlgebra:
    """Path algebra modulo monomial relations, with explicit finite basis."""

    def __init__(
        self,
        quiver,
        relations,
        arrow_degrees=None,
        max_paths=DEFAULT_MAX_PATHS,
        vertex_names=None,
        meta=None,
    ):
        self.quiver = quiver
        rels = []
        for rel in relations:
            rel = tuple(int(a) for a in rel)
            if len(rel) < 2:
                raise ValidationError("relations must be paths of length >= 2")
            for a, b in zip(rel, rel[1:]):
                if quiver.arrows[a][1] != quiver.arrows[b][0]:
                    raise ValidationError(f"relation {rel} is not a composable path")
            rels.append(rel)
        self.relations = tuple(sorted(set(rels)))
        if arrow_degrees is not None:
            arrow_degrees = tuple(int(d) for d in arrow_degrees)
            if len(arrow_degrees) != len(quiver.arrows):
                raise ValidationError("one degree per arrow required")
        self.arrow_degrees = arrow_degrees
        self.vertex_names = (
            tuple(vertex_names)
            if vertex_names is not None
            else tuple(range(quiver.vertices))
        )
        if len(self.vertex_names) != quiver.vertices:
            raise ValidationError("one name per vertex required")
        self.meta = dict(meta or {})
        self._max_rel_len = max((len(r) for r in self.relations), default=0)
        self.basis = self._generate_basis(max_paths)
        self._paths_from = {v: [] for v in range(quiver.vertices)}
        self._paths_between = {}
        for p in self.basis:
            self._paths_from[p.source].append(p)
            key = (p.source, self.target(p))
            self._paths_between.setdefault(key, []).append(p)

    def _is_zero_arrows(self, arrows):
        for rel in self.relations:
            k = len(rel)
            for start in range(len(arrows) - k + 1):
                if arrows[start : start + k] == rel:
                    return True
        return False

    def _generate_basis(self, max_paths):
        out_arrows = {v: [] for v in range(self.quiver.vertices)}
        for a, (s, _) in enumerate(self.quiver.arrows):
            out_arrows[s].append(a)
        basis = [Path(v, ()) for v in range(self.quiver.vertices)]
        frontier = list(basis)
        while frontier:
            nxt = []
            for p in frontier:
                for a in out_arrows[self.target(p)]:
                    arrows = p.arrows + (a,)
                    # only windows ending at the new arrow can introduce a relation
                    tail = arrows[-self._max_rel_len :] if self._max_rel_len else arrows
                    if self._max_rel_len and self._is_zero_arrows(tail):
                        continue
                    nxt.append(Path(p.source, arrows))
            basis.extend(nxt)
            if len(basis) > max_paths:
                raise InfiniteDimensionalError(
                    f"path basis exceeds {max_paths}; algebra is infinite-dimensional "
                    "or the cap is too small"
                )
            frontier = nxt
        basis.sort(key=lambda p: (len(p.arrows), p.source, p.arrows))
        return tuple(basis)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def is_graded(self):
        return self.arrow_degrees is not None

    def target(self, path):
        if path.arrows:
            return self.quiver.arrows[path.arrows[-1]][1]
        return path.source

    def degree(self, path):
        if self.arrow_degrees is None:
            return 0
        return sum(self.arrow_degrees[a] for a in path.arrows)

    def compose(self, p, q):
        """Travel p then q; None when the composite vanishes."""
        if self.target(p) != q.source:
            raise ValidationError("paths not composable")
        arrows = p.arrows + q.arrows
        if self._is_zero_arrows(arrows):
            return None
        return Path(p.source, arrows)

    def paths_from(self, v):
        return tuple(self._paths_from[v])

    def paths_between(self, v, w):
        return tuple(self._paths_between.get((v, w), ()))

    def arrow_path(self, a):
        return Path(self.quiver.arrows[a][0], (a,))

    def simple_module(self, v):
        dims = [1 if w == v else 0 for w in range(self.quiver.vertices)]
        maps = [
            ExactMatrix.zero(dims[t], dims[s]) for s, t in self.quiver.arrows
        ]
        degrees = tuple(tuple(0 for _ in range(d)) for d in dims) if self.is_graded else None
        return FDModule(self, dims, maps, degrees)

    def projective_module(self, v):
        """Left projective at v; basis at w is paths_between(v, w)."""
        paths = {w: self.paths_between(v, w) for w in range(self.quiver.vertices)}
        index = {w: {p: i for i, p in enumerate(paths[w])} for w in paths}
        dims = [len(paths[w]) for w in range(self.quiver.vertices)]
        maps = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            mat = [[0] * dims[s] for _ in range(dims[t])]
            for j, p in enumerate(paths[s]):
                ext = self.compose(p, self.arrow_path(a))
                if ext is not None:
                    mat[index[t][ext]][j] = 1
            maps.append(ExactMatrix(mat, QQ, dims[t], dims[s]))
        degrees = (
            tuple(tuple(self.degree(p) for p in paths[w]) for w in range(self.quiver.vertices))
            if self.is_graded
            else None
        )
        mod = FDModule(self, dims, maps, degrees)
        mod.path_basis = paths
        return mod

    @classmethod
    def from_json(cls, doc, max_paths=DEFAULT_MAX_PATHS):
        try:
            nverts = doc["vertices"]
            raw_arrows = [tuple(a) for a in doc["arrows"]]
            relations = [tuple(r) for r in doc.get("relations", [])]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad algebra document: {exc}") from exc
        degrees = None
        if any(len(a) == 3 for a in raw_arrows):
            degrees = [a[2] if len(a) == 3 else 0 for a in raw_arrows]
        quiver = Quiver(nverts, [(a[0], a[1]) for a in raw_arrows])
        return cls(quiver, relations, degrees, max_paths=max_paths)


class FDModule:
    """Module over a monomial algebra as a covariant representation."""

    __slots__ = ("algebra", "dims", "maps", "degrees", "path_basis")

    def __init__(self, algebra, dims, maps, degrees=None):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.maps = tuple(maps)
        self.path_basis = None
        quiver = algebra.quiver
        if len(self.dims) != quiver.vertices or len(self.maps) != len(quiver.arrows):
            raise ValidationError("module data does not match the quiver")
        for a, (s, t) in enumerate(quiver.arrows):
            m = self.maps[a]
            if m.rows != self.dims[t] or m.cols != self.dims[s]:
                raise ValidationError(f"matrix for arrow {a} has the wrong shape")
        for rel in algebra.relations:
            if not self.path_action(Path(quiver.arrows[rel[0]][0], rel)).is_zero():
                raise ValidationError(f"relation {rel} does not act by zero")
        if degrees is not None:
            degrees = tuple(tuple(int(x) for x in degs) for degs in degrees)
            if tuple(len(d) for d in degrees) != self.dims:
                raise ValidationError("degree data does not match dims")
            if algebra.arrow_degrees is None:
                raise ValidationError("graded module over ungraded algebra")
            for a, (s, t) in enumerate(quiver.arrows):
                da = algebra.arrow_degrees[a]
                m = self.maps[a]
                for i in range(self.dims[t]):
                    for j in range(self.dims[s]):
                        if m.entries[i][j] != 0 and degrees[t][i] != degrees[s][j] + da:
                            raise ValidationError("arrow action is not degree-homogeneous")
        self.degrees = degrees

    def total_dim(self):
        return sum(self.dims)

    def is_zero(self):
        return self.total_dim() == 0

    def path_action(self, path):
        quiver = self.algebra.quiver
        v = path.source
        mat = ExactMatrix.identity(self.dims[v])
        for a in path.arrows:
            mat = self.maps[a] @ mat
        return mat


def module_hom_dim(m, n):
    if m.algebra is not n.algebra and m.algebra.quiver != n.algebra.quiver:
        raise ValidationError("modules over different algebras")
    return len(
        intertwiner_basis(m.algebra.quiver.arrows, m.dims, m.maps, n.dims, n.maps)
    )


def build_algebra(quiver, relations, grading=None, max_paths=DEFAULT_MAX_PATHS):
    return MonomialAlgebra(quiver, relations, grading, max_paths=max_paths)


class ProjComplex:
    """Finite free dg module: generators (vertex, degree), differential entries
    are homogeneous path combinations from the target generator's vertex to the
    source generator's vertex (left multiplication)."""

    def __init__(self, algebra, gens, diff, check=True):
        self.algebra = algebra
        self.gens = tuple((int(v), int(s)) for v, s in gens)
        norm = {}
        for (k, j), combo in diff.items():
            combo = {p: c for p, c in combo.items() if c != 0}
            if combo:
                norm[(int(k), int(j))] = combo
        self.diff = norm
        if check:
            self._validate()

    def _validate(self):
        alg = self.algebra
        for (k, j), combo in self.diff.items():
            vj, sj = self.gens[j]
            vk, sk = self.gens[k]
            want = sj + 1 - sk
            for p in combo:
                if p.source != vk or alg.target(p) != vj:
                    raise ValidationError(
                        f"differential entry ({k},{j}) uses a path {p.source}->{alg.target(p)}, "
                        f"expected {vk}->{vj}"
                    )
                if alg.degree(p) != want:
                    raise ValidationError(
                        f"differential entry ({k},{j}) has degree {alg.degree(p)}, expected {want}"
                    )
        # d∘d = 0 with Koszul signs: sum_k (-1)^{deg a_kj} a_kj * a_lk = 0
        for j in range(len(self.gens)):
            for l in range(len(self.gens)):
                acc = {}
                for k in range(len(self.gens)):
                    first = self.diff.get((k, j))
                    second = self.diff.get((l, k))
                    if not first or not second:
                        continue
                    for p, cp in first.items():
                        sign = -1 if alg.degree(p) % 2 else 1
                        for q, cq in second.items():
                            comp = alg.compose(q, p)
                            if comp is not None:
                                acc[comp] = acc.get(comp, 0) + sign * cp * cq
                if any(c != 0 for c in acc.values()):
                    raise ValidationError("d∘d != 0 in the algebra")

    @classmethod
    def projective(cls, algebra, vertex, degree=0):
        return cls(algebra, [(vertex, degree)], {})

    def shift(self, s):
        """Cohomological shift: degrees move by s, differential by (-1)^s."""
        sign = -1 if s % 2 else 1
        return ProjComplex(
            self.algebra,
            [(v, d + s) for v, d in self.gens],
            {
                key: {p: sign * c for p, c in combo.items()}
                for key, combo in self.diff.items()
            },
            check=False,
        )

    def flatten(self):
        """Underlying complex of vector spaces, graded by total degree."""
        alg = self.algebra
        basis = {}  # degree -> list of (gen index, path)
        for j, (v, s) in enumerate(self.gens):
            for p in alg.paths_from(v):
                basis.setdefault(s + alg.degree(p), []).append((j, p))
        pos = {
            deg: {bp: i for i, bp in enumerate(items)} for deg, items in basis.items()
        }
        terms = {deg: len(items) for deg, items in basis.items()}
        diffs = {}
        for deg, items in basis.items():
            tgt = basis.get(deg + 1, [])
            if not tgt:
                continue
            mat = [[0] * len(items) for _ in range(len(tgt))]
            for col, (j, p) in enumerate(items):
                sign = -1 if alg.degree(p) % 2 else 1
                for k in range(len(self.gens)):
                    combo = self.diff.get((k, j))
                    if not combo:
                        continue
                    for a, c in combo.items():
                        comp = alg.compose(a, p)
                        if comp is not None:
                            mat[pos[deg + 1][(k, comp)]][col] += sign * c
            diffs[deg] = ExactMatrix(mat, QQ, len(tgt), len(items))
        return CochainComplex(terms, diffs)


def hom_complex_dims(x, y, window=None):
    """dim H^n of the total Hom complex Hom(x, y), for n in the window.

    The window must cover every degree where the Hom complex itself is
    nonzero; outside the support everything is provably zero.
    """
    alg = x.algebra
    if y.algebra is not alg and y.algebra.quiver != alg.quiver:
        raise ValidationError("complexes over different algebras")
    basis = {}  # n -> list of (x gen j, y gen i, path w_i -> v_j)
    for j, (vj, sj) in enumerate(x.gens):
        for i, (wi, ti) in enumerate(y.gens):
            for p in alg.paths_between(wi, vj):
                n = ti - sj + alg.degree(p)
                basis.setdefault(n, []).append((j, i, p))
    if not basis:
        return {}
    support = sorted(basis)
    if window is None:
        window = (support[0] - 2, support[-1] + 2)
    lo, hi = window
    if lo > support[0] or hi < support[-1]:
        raise WindowTooSmallError(
            f"window [{lo},{hi}] too small: Hom complex is supported on "
            f"[{support[0]},{support[-1]}]"
        )
    pos = {n: {t: i for i, t in enumerate(items)} for n, items in basis.items()}
    terms = {n: len(items) for n, items in basis.items()}
    diffs = {}
    for n, items in basis.items():
        tgt = basis.get(n + 1, [])
        if not tgt:
            continue
        mat = [[0] * len(items) for _ in range(len(tgt))]
        for col, (j, i, p) in enumerate(items):
            # d_Y after f
            sign_p = -1 if alg.degree(p) % 2 else 1
            for l in range(len(y.gens)):
                combo = y.diff.get((l, i))
                if not combo:
                    continue
                for b, cb in combo.items():
                    comp = alg.compose(b, p)
                    if comp is not None:
                        mat[pos[n + 1][(j, l, comp)]][col] += sign_p * cb
            # -(-1)^n f after d_X
            for j2 in range(len(x.gens)):
                combo = x.diff.get((j, j2))
                if not combo:
                    continue
                for a, ca in combo.items():
                    comp = alg.compose(p, a)
                    if comp is not None:
                        exp = n * (alg.degree(a) + 1)
                        sign = -1 if exp % 2 == 0 else 1
                        mat[pos[n + 1][(j2, i, comp)]][col] += sign * ca
        diffs[n] = ExactMatrix(mat, QQ, len(tgt), len(items))
    dims = CochainComplex(terms, diffs).cohomology_dims()
    return {n: h for n, h in dims.items() if lo <= n <= hi}


def detect_sphere_like(x, window=None):
    """SphereLikeProfile(n, d) when graded endos are {0:1, d:n}; else None."""
    dims = hom_complex_dims(x, x, window)
    if dims.get(0) != 1:
        return None
    rest = {d: n for d, n in dims.items() if d != 0}
    if len(rest) != 1:
        return None
    ((d, n),) = rest.items()
    return SphereLikeProfile(n=n, d=d)


@dataclass
class Resolution:
    complex: ProjComplex
    steps: tuple  # per step, tuple of (vertex, internal degree) of the cover
    terminated: bool
    module: FDModule

    def step_vertices(self):
        return tuple(tuple(v for v, _ in step) for step in self.steps)

    def exactness_certificate(self):
        """Cohomology of the deleted resolution: concentrated in degree <= 0
        with total dimension equal to the resolved module."""
        dims = self.complex.flatten().cohomology_dims()
        if any(n > 0 for n in dims):
            raise InternalInconsistencyError("resolution not exact in positive degrees")
        if self.terminated and sum(dims.values()) != self.module.total_dim():
            raise InternalInconsistencyError("resolution homology does not match module")
        return dims


def _top_generators(dims, maps, degrees, quiver):
    """Complement of the radical: (vertex, basis index, degree) triples."""
    out = []
    for w in range(quiver.vertices):
        cols = []
        for a, (_, t) in enumerate(quiver.arrows):
            if t != w:
                continue
            m = maps[a]
            for j in range(m.cols):
                cols.append([m.entries[i][j] for i in range(m.rows)])
        if cols:
            rad = ExactMatrix.from_columns(cols, dims[w])
            _, pivots = rad.transpose().rref()
            pivot_rows = set(pivots)
        else:
            pivot_rows = set()
        for i in range(dims[w]):
            if i not in pivot_rows:
                out.append((w, i, degrees[w][i] if degrees is not None else 0))
    return out


def minimal_projective_resolution(module, max_len=DEFAULT_MAX_RESOLUTION):
    """Resolution by projective covers; generator degrees track the grading."""
    alg = module.algebra
    quiver = alg.quiver
    nverts = quiver.vertices

    cur_dims = module.dims
    cur_maps = module.maps
    cur_degrees = module.degrees
    cur_emb = None  # per-vertex matrices: cur coords -> previous cover coords
    prev_pbasis = None
    prev_gen_offset = 0

    gens = []
    diff = {}
    steps = []
    terminated = False

    for step in range(max_len + 1):
        tops = _top_generators(cur_dims, cur_maps, cur_degrees, quiver)
        if not tops:
            terminated = True
            break
        gen_offset = len(gens)
        step_gens = []
        for w, i, d in tops:
            step_gens.append((w, -step + d))
        steps.append(tuple((w, d) for w, _, d in tops))
        gens.extend(step_gens)

        if step >= 1:
            # each top vector, pushed through the embedding, is the image of
            # the new generator inside the previous cover, in path coordinates
            for g_local, (w, i, _) in enumerate(tops):
                vec = [cur_emb[w].entries[r][i] for r in range(cur_emb[w].rows)]
                combo_per_gen = {}
                for r, c in enumerate(vec):
                    if c == 0:
                        continue
                    g_prev, path = prev_pbasis[w][r]
                    combo_per_gen.setdefault(g_prev, {})[path] = c
                for g_prev, combo in combo_per_gen.items():
                    diff[(prev_gen_offset + g_prev, gen_offset + g_local)] = combo

        # cover P = direct sum of projectives at the top vertices
        pbasis = {w: [] for w in range(nverts)}
        for g_local, (w0, _, _) in enumerate(tops):
            for p in alg.paths_from(w0):
                pbasis[alg.target(p)].append((g_local, p))
        p_dims = [len(pbasis[w]) for w in range(nverts)]
        p_index = {w: {bp: i for i, bp in enumerate(pbasis[w])} for w in pbasis}

        # cover map per vertex: column (g, p) -> path action on the top vector
        phi = []
        for w in range(nverts):
            cols = []
            for g_local, p in pbasis[w]:
                w0, i0, _ = tops[g_local]
                act = _path_action(cur_maps, cur_dims, alg, p)
                cols.append([act.entries[r][i0] for r in range(cur_dims[w])])
            phi.append(ExactMatrix.from_columns(cols, cur_dims[w]) if cols else ExactMatrix.zero(cur_dims[w], 0))

        kers = [phi[w].kernel_matrix() for w in range(nverts)]
        new_dims = [kers[w].cols for w in range(nverts)]
        if sum(new_dims) == 0:
            terminated = True
            break

        p_maps = []
        for a, (s, t) in enumerate(quiver.arrows):
            mat = [[0] * p_dims[s] for _ in range(p_dims[t])]
            for col, (g_local, p) in enumerate(pbasis[s]):
                ext = alg.compose(p, alg.arrow_path(a))
                if ext is not None:
                    mat[p_index[t][(g_local, ext)]][col] = 1
            p_maps.append(ExactMatrix(mat, QQ, p_dims[t], p_dims[s]))

        new_maps = []
        for a, (s, t) in enumerate(quiver.arrows):
            rhs = p_maps[a] @ kers[s]
            if new_dims[t] == 0 or new_dims[s] == 0:
                new_maps.append(ExactMatrix.zero(new_dims[t], new_dims[s]))
            else:
                new_maps.append(kers[t].solve(rhs))

        if alg.is_graded:
            p_degrees = {
                w: [
                    tops[g_local][2] + alg.degree(p) for g_local, p in pbasis[w]
                ]
                for w in range(nverts)
            }
            new_degrees = []
            for w in range(nverts):
                degs = []
                for c in range(kers[w].cols):
                    lead = next(
                        r for r in range(kers[w].rows) if kers[w].entries[r][c] != 0
                    )
                    degs.append(p_degrees[w][lead])
                new_degrees.append(tuple(degs))
            cur_degrees = tuple(new_degrees)
        else:
            cur_degrees = None

        cur_dims = tuple(new_dims)
        cur_maps = tuple(new_maps)
        cur_emb = kers
        prev_pbasis = pbasis
        prev_gen_offset = gen_offset

    cx = ProjComplex(alg, gens, diff)
    return Resolution(complex=cx, steps=tuple(steps), terminated=terminated, module=module)


def _path_action(maps, dims, alg, path):
    mat = ExactMatrix.identity(dims[path.source])
    for a in path.arrows:
        mat = maps[a] @ mat
    return mat


def module_ext_dims(m, n, max_len=DEFAULT_MAX_RESOLUTION):
    """Ext^*(m, n) via hom complex of minimal resolutions."""
    rm = minimal_projective_resolution(m, max_len)
    rn = minimal_projective_resolution(n, max_len)
    if not (rm.terminated and rn.terminated):
        raise InternalInconsistencyError("resolution did not terminate within the cap")
    return hom_complex_dims(rm.complex, rn.complex)


# ---------------------------------------------------------------------------
# algebra families


def lambda_rnm(r, n, m):
    """Cycle-with-tail algebra: a tail -m -> ... -> 0 feeding an n-cycle, with
    r consecutive length-two relations ending in the pair through vertex 0."""
    if not (n >= r >= 1 and m >= 0):
        raise ValidationError(f"lambda needs n >= r >= 1 and m >= 0, got ({r},{n},{m})")
    names = list(range(-m, n))
    idx = {name: i for i, name in enumerate(names)}
    arrows = []
    arrow_of = {}
    for i in range(-m, n - 1):
        arrow_of[i] = len(arrows)
        arrows.append((idx[i], idx[i + 1]))
    arrow_of[n - 1] = len(arrows)
    arrows.append((idx[n - 1], idx[0]))
    relations = []
    for j in range(n - r, n):
        relations.append((arrow_of[j], arrow_of[(j + 1) % n]))
    quiver = Quiver(len(names), arrows)
    meta = {
        "family": f"lambda({r},{n},{m})",
        "finite_global_dimension": r < n,
    }
    return MonomialAlgebra(quiver, relations, vertex_names=names, meta=meta)


def graded_kronecker(m, q):
    """Two vertices, one degree-0 arrow and m-1 degree-q arrows."""
    if m <= 1:
        raise ValidationError("graded Kronecker needs m > 1")
    if q == 0:
        raise ValidationError("graded Kronecker needs q != 0")
    quiver = Quiver(2, [(0, 1)] * m)
    degrees = [0] + [q] * (m - 1)
    meta = {"family": f"gradedkronecker({m},{q})"}
    return MonomialAlgebra(quiver, [], degrees, vertex_names=("1", "2"), meta=meta)


def a_p_algebra(p):
    """Dual numbers with the variable in degree -p (p >= 1)."""
    if p < 1:
        raise ValidationError("a_p needs p >= 1")
    quiver = Quiver(1, [(0, 0)])
    meta = {"family": f"ap({p})"}
    return MonomialAlgebra(quiver, [(0, 0)], [-p], meta=meta)


def local_square_zero(d):
    """R_d = k[x_1..x_{d-1}] / (all products of the variables)."""
    if d < 2:
        raise ValidationError("R_d needs d >= 2")
    quiver = Quiver(1, [(0, 0)] * (d - 1))
    relations = [(i, j) for i in range(d - 1) for j in range(d - 1)]
    return MonomialAlgebra(quiver, relations)


# ---------------------------------------------------------------------------
# endomorphism algebras


@dataclass
class EndomorphismAlgebra:
    total_dim: int
    hom_dims: tuple  # hom_dims[i][j] = dim Hom(M_i, M_j)
    presentation: MonomialAlgebra  # vertex i <-> summand i
    module_count: int


def endomorphism_algebra(modules, max_paths=DEFAULT_MAX_PATHS):
    """End(⊕ modules) with a computed quiver-with-relations presentation.

    Homs are composed left to right (the algebra acts on the right of the
    module), so the presentation's left projectives reproduce the usual
    projective covers of the summand tops.  Requires pairwise non-isomorphic
    summands with local endomorphism rings; raises NotMonomialError when no
    monomial presentation exists for the chosen arrow basis.
    """
    r = len(modules)
    if r == 0:
        raise ValidationError("need at least one module")
    quiver = modules[0].algebra.quiver
    hom = {}
    for i in range(r):
        for j in range(r):
            hom[i, j] = intertwiner_basis(
                quiver.arrows, modules[i].dims, modules[i].maps, modules[j].dims, modules[j].maps
            )
    total = sum(len(hom[i, j]) for i in range(r) for j in range(r))

    def flatten(i, j, mats):
        out = []
        for v in range(quiver.vertices):
            for row in mats[v].entries:
                out.extend(row)
        return out

    # coordinates of an arbitrary hom in the chosen basis of Hom(M_i, M_j)
    coord_solvers = {}
    for i in range(r):
        for j in range(r):
            if hom[i, j]:
                mat = ExactMatrix.from_columns(
                    [flatten(i, j, b) for b in hom[i, j]],
                    len(flatten(i, j, hom[i, j][0])),
                )
                coord_solvers[i, j] = mat

    def compose(i, j, k, f, g):
        # first f: M_i -> M_j, then g: M_j -> M_k
        return [g[v] @ f[v] for v in range(quiver.vertices)]

    def coords(i, k, mats):
        vec = flatten(i, k, mats)
        if all(x == 0 for x in vec):
            return None
        solver = coord_solvers[i, k]
        rhs = ExactMatrix([[x] for x in vec], QQ, len(vec), 1)
        sol = solver.solve(rhs)
        return tuple(sol.entries[t][0] for t in range(sol.rows))

    # global basis and left-multiplication matrices for the radical (trace form)
    elems = [(i, j, b) for i in range(r) for j in range(r) for b in range(len(hom[i, j]))]
    pos = {e: t for t, e in enumerate(elems)}

    def product_vector(p, q):
        # p = (i,j,b) then q = (j2,k,c): nonzero only when j == j2
        i, j, b = p
        j2, k, c = q
        if j != j2:
            return None
        comp = compose(i, j, k, hom[i, j][b], hom[j, k][c])
        co = coords(i, k, comp)
        if co is None:
            return None
        return {(i, k, t): x for t, x in enumerate(co) if x != 0}

    prod_table = {}
    for p in elems:
        for q in elems:
            vec = product_vector(p, q)
            if vec:
                prod_table[p, q] = vec

    left_mult = {}
    for p in elems:
        mat = [[0] * total for _ in range(total)]
        for q in elems:
            vec = prod_table.get((p, q))
            if vec:
                for e, x in vec.items():
                    mat[pos[e]][pos[q]] = x
        left_mult[p] = ExactMatrix(mat, QQ, total, total)

    gram = [
        [
            sum(
                (left_mult[p] @ left_mult[q]).entries[t][t]
                for t in range(total)
            )
            for q in elems
        ]
        for p in elems
    ]
    rad_vectors = ExactMatrix(gram, QQ, total, total).kernel_basis()

    # radical is Peirce-homogeneous: project onto each block
    rad_block = {}
    for i in range(r):
        for j in range(r):
            block_pos = [pos[(i, j, b)] for b in range(len(hom[i, j]))]
            if not block_pos:
                continue
            vectors = []
            for vec in rad_vectors:
                sub = [vec[t] for t in block_pos]
                if any(x != 0 for x in sub):
                    vectors.append(sub)
            if vectors:
                mat = ExactMatrix.from_columns(vectors, len(block_pos))
                _, pivots = mat.transpose().rref()
                basis_rows, _ = mat.transpose().rref()
                rad_block[i, j] = [tuple(row) for row in basis_rows[: len(pivots)]]

    def block_combo(i, j, coeffs):
        mats = None
        for b, c in enumerate(coeffs):
            if c == 0:
                continue
            scaled = [hom[i, j][b][v].scale(c) for v in range(quiver.vertices)]
            mats = scaled if mats is None else [m + s for m, s in zip(mats, scaled)]
        return mats

    # rad^2 per block, then arrows = complement of rad^2 in rad
    rad2_block = {}
    for (i, j), basis_i in rad_block.items():
        for (j2, k), basis_j in rad_block.items():
            if j2 != j:
                continue
            acc = rad2_block.setdefault((i, k), [])
            for cf in basis_i:
                f = block_combo(i, j, cf)
                for cg in basis_j:
                    g = block_combo(j, k, cg)
                    co = coords(i, k, compose(i, j, k, f, g)) if f and g else None
                    if co is not None:
                        acc.append(co)

    hom_arrows = []  # (i, j, mats): arrow hom M_i -> M_j
    for (i, j), rbasis in sorted(rad_block.items()):
        space = [list(v) for v in rad2_block.get((i, j), [])]
        for cf in rbasis:
            old_rank = ExactMatrix(space, QQ, len(space), len(cf)).rank() if space else 0
            cand = space + [list(cf)]
            if ExactMatrix(cand, QQ, len(cand), len(cf)).rank() > old_rank:
                hom_arrows.append((i, j, block_combo(i, j, cf)))
                space.append(list(cf))

    # monomial basis discovery over hom-paths (compose left to right)
    found = {}  # (i, j) -> list of flattened values (for independence checks)
    nonzero_paths = []  # (arrow id tuple, i, j, mats)
    relations_hom = []
    for v in range(r):
        nonzero_paths.append(((), v, v, None))
    frontier = list(nonzero_paths)
    id_homs = {
        v: [ExactMatrix.identity(modules[v].dims[w]) for w in range(quiver.vertices)]
        for v in range(r)
    }

    while frontier:
        nxt = []
        for seq, i, j, mats in frontier:
            for aid, (ai, aj, amats) in enumerate(hom_arrows):
                if ai != j:
                    continue
                if mats is None:
                    new_mats = amats
                else:
                    new_mats = [amats[v] @ mats[v] for v in range(quiver.vertices)]
                new_seq = seq + (aid,)
                vec = flatten(i, aj, new_mats)
                if all(x == 0 for x in vec):
                    # minimal relation: shortest zero suffix
                    rel = _minimal_zero_suffix(new_seq, hom_arrows, id_homs, quiver, flatten)
                    if rel not in relations_hom and not any(
                        _contains(rel, known) for known in relations_hom
                    ):
                        relations_hom.append(rel)
                    continue
                if any(_contains(new_seq, known) for known in relations_hom):
                    raise NotMonomialError("nonzero path contains a zero relation")
                block = found.setdefault((i, aj), [])
                trial = block + [vec]
                if ExactMatrix(trial, QQ, len(trial), len(vec)).rank() != len(trial):
                    raise NotMonomialError(
                        "path values are linearly dependent; no monomial presentation "
                        "for this arrow basis"
                    )
                block.append(vec)
                nonzero_paths.append((new_seq, i, aj, new_mats))
                nxt.append((new_seq, i, aj, new_mats))
        if len(nonzero_paths) > max_paths:
            raise InfiniteDimensionalError("endomorphism path search exceeded cap")
        frontier = nxt

    if len(nonzero_paths) != total:
        raise NotMonomialError(
            f"monomial basis has {len(nonzero_paths)} paths for algebra dimension {total}"
        )

    # translate to a quiver: hom-arrow M_i -> M_j becomes a quiver arrow j -> i,
    # and hom sequences reverse into travel order
    q_arrows = [(j, i) for (i, j, _) in hom_arrows]
    pres_quiver = Quiver(r, q_arrows)
    q_relations = [tuple(reversed(rel)) for rel in relations_hom]
    presentation = MonomialAlgebra(pres_quiver, q_relations, max_paths=max_paths)
    if presentation.dim != total:
        raise NotMonomialError(
            f"presentation dimension {presentation.dim} != endomorphism dimension {total}"
        )
    hom_dims = tuple(tuple(len(hom[i, j]) for j in range(r)) for i in range(r))
    return EndomorphismAlgebra(
        total_dim=total,
        hom_dims=hom_dims,
        presentation=presentation,
        module_count=r,
    )


def _contains(seq, sub):
    k = len(sub)
    return any(seq[s : s + k] == sub for s in range(len(seq) - k + 1))


def _minimal_zero_suffix(seq, hom_arrows, id_homs, quiver, flatten):
    # shortest suffix of seq with zero composite; proper subpaths stay nonzero
    for k in range(2, len(seq) + 1):
        suffix = seq[-k:]
        i = hom_arrows[suffix[0]][0]
        mats = id_homs[i]
        cur = i
        for aid in suffix:
            _, aj, amats = hom_arrows[aid]
            mats = [amats[v] @ mats[v] for v in range(quiver.vertices)]
            cur = aj
        if all(x == 0 for x in flatten(i, cur, mats)):
            return suffix
    raise InternalInconsistencyError("zero path with no zero suffix")
