"""Homological dimensions, Gorenstein-projectivity certificates, GP catalogs.

Conventions: the "left self-injective dimension" of an algebra A is the
injective dimension of the left regular module, computed as the projective
dimension of its vector-space dual over the opposite algebra (and dually on
the right).  A module certificate is one of three honest verdicts:
GorensteinProjective (with re-checkable data), NotGP (with a nonzero Ext
witness against the regular module), or Inconclusive.
"""

from dataclasses import dataclass, field

from .presentation import FiniteDimAlgebra, opposite
from .rep import (
    CanonicalRegistry,
    FieldUnsupported,
    Representation,
    decompose,
    dual_rep,
    ext_data,
    is_isomorphic,
    is_projective,
    projective_dimension,
    regular,
    simple,
    star,
    syzygy,
)

DEFAULT_BOUND = 16
PROBE_DEPTH = 4  # syzygy depth used for seeds when the Gorenstein dimension is unknown


@dataclass(frozen=True)
class AtLeast:
    """A homological dimension known only to be >= bound."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


@dataclass
class DimensionReport:
    algebra: FiniteDimAlgebra
    bound: int
    proj_dims: dict  # vertex name -> int | AtLeast
    global_dim: object  # int | AtLeast
    self_inj_dim_left: object  # int | AtLeast
    self_inj_dim_right: object  # int | AtLeast
    gorenstein_status: str  # "yes" | "no_within_bound" | "unknown"
    gorenstein_dim: object  # int when status == "yes", else None

    @property
    def is_self_injective(self) -> bool:
        return self.gorenstein_status == "yes" and self.gorenstein_dim == 0

    @property
    def has_finite_global_dim(self) -> bool:
        return isinstance(self.global_dim, int)

    def describe(self) -> str:
        lines = [
            f"projective dimensions of simples: "
            + ", ".join(f"{v}: {d}" for v, d in sorted(self.proj_dims.items())),
            f"global dimension: {self.global_dim}",
            f"self-injective dimension (left, right): "
            f"({self.self_inj_dim_left}, {self.self_inj_dim_right})",
        ]
        if self.gorenstein_status == "yes":
            lines.append(f"Gorenstein: yes, dimension {self.gorenstein_dim}")
        else:
            lines.append(f"Gorenstein: {self.gorenstein_status}")
        return "\n".join(lines)


def _dim_or_at_least(value, bound):
    return value if value is not None else AtLeast(bound)


def dimension_report(a: FiniteDimAlgebra, bound: int = DEFAULT_BOUND) -> DimensionReport:
    """Projective dimensions of simples, global and self-injective dimensions."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    key = ("dimension_report", bound)
    cached = a._caches.get(key)
    if cached is not None:
        return cached
    proj_dims = {}
    for v in a.quiver.vertices:
        proj_dims[v] = _dim_or_at_least(
            projective_dimension(simple(a, v), bound), bound
        )
    if any(isinstance(d, AtLeast) for d in proj_dims.values()):
        global_dim = AtLeast(bound)
    else:
        global_dim = max(proj_dims.values(), default=0)
    op = opposite(a)
    left = _dim_or_at_least(
        projective_dimension(dual_rep(regular(a)), bound), bound
    )
    right = _dim_or_at_least(
        projective_dimension(dual_rep(regular(op)), bound), bound
    )
    if isinstance(left, int) and isinstance(right, int):
        assert left == right, "finite one-sided self-injective dimensions must agree"
        status, gdim = "yes", left
    else:
        status, gdim = "no_within_bound", None
    report = DimensionReport(
        algebra=a,
        bound=bound,
        proj_dims=proj_dims,
        global_dim=global_dim,
        self_inj_dim_left=left,
        self_inj_dim_right=right,
        gorenstein_status=status,
        gorenstein_dim=gdim,
    )
    a._caches[key] = report
    return report


@dataclass
class GPVerdict:
    status: str  # "GorensteinProjective" | "NotGP" | "Inconclusive"
    criterion: str
    data: dict = field(default_factory=dict)

    @property
    def is_gp(self) -> bool:
        return self.status == "GorensteinProjective"


def is_gp(m: Representation, report: DimensionReport = None, bound: int = DEFAULT_BOUND) -> GPVerdict:
    """Decide Gorenstein projectivity of m.

    Strategy, in order: self-injective algebra; Ext-vanishing up to the
    Gorenstein dimension; syzygy periodicity together with Ext vanishing up
    to the period.  A nonzero Ext^i(m, A) is a NotGP witness at any point.
    """
    a = m.algebra
    if report is None:
        report = dimension_report(a, bound)
    if m.is_zero or is_projective(m):
        return GPVerdict("GorensteinProjective", "projective")
    if report.is_self_injective:
        return GPVerdict("GorensteinProjective", "self-injective-algebra")
    reg = regular(a)
    if report.gorenstein_status == "yes":
        d = report.gorenstein_dim
        for i in range(1, d + 1):
            dim = ext_data(m, reg, i)[0]
            if dim:
                return GPVerdict("NotGP", "ext-witness", {"degree": i, "dimension": dim})
        return GPVerdict("GorensteinProjective", "ext-vanishing", {"range": d})
    # Gorenstein dimension not certified: scan Ext and hunt for a syzygy period
    chain = [m]
    for i in range(1, bound + 1):
        dim = ext_data(m, reg, i)[0]
        if dim:
            return GPVerdict("NotGP", "ext-witness", {"degree": i, "dimension": dim})
        chain.append(syzygy(chain[-1]))
        for s in range(len(chain) - 1):
            ok, _ = is_isomorphic(chain[s], chain[-1])
            if ok:
                return GPVerdict(
                    "GorensteinProjective",
                    "syzygy-periodicity",
                    {"low": s, "high": i},
                )
    return GPVerdict("Inconclusive", "bound-exhausted", {"bound": bound})


def certify_gp(m: Representation, bound: int = DEFAULT_BOUND) -> GPVerdict:
    """Cached Gorenstein-projectivity verdict (keyed by the module's data)."""
    cache = m.algebra._caches.setdefault("gp_certificates", {})
    key = m.key()
    verdict = cache.get(key)
    if verdict is None:
        verdict = is_gp(m, bound=bound)
        cache[key] = verdict
    return verdict


def co_syzygy(m: Representation) -> Representation:
    """Inverse syzygy of a Gorenstein projective module: star(syzygy(star(m)))."""
    return star(syzygy(star(m)))


@dataclass
class GPCatalog:
    algebra: FiniteDimAlgebra
    items: list  # canonical indecomposable non-projective GP representations
    verdict: str  # "CMFree" | "CMFinite" | "Unknown"
    report: DimensionReport
    certificates: list  # GPVerdict per item
    notes: list

    def describe(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        for i, (item, cert) in enumerate(zip(self.items, self.certificates)):
            lines.append(
                f"item {i}: dims {item.dim_vector}, certificate {cert.criterion}"
            )
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def gp_catalog(
    a: FiniteDimAlgebra, dim_cap: int = None, iter_cap: int = 32
) -> GPCatalog:
    """Enumerate indecomposable non-projective GP modules and settle CM type.

    Seeds are d-th syzygies of the simples (d = Gorenstein dimension, or a
    fixed probe depth when unknown); the seed set is closed under syzygy,
    co-syzygy, and direct-sum decomposition, with projective summands
    discarded.  Caps force termination; hitting one demotes the verdict to
    Unknown.
    """
    if a.field.char == 0:
        raise FieldUnsupported("GP catalog search requires a finite prime field")
    if dim_cap is None:
        dim_cap = 64 * a.dim
    report = dimension_report(a)
    notes = []
    if report.gorenstein_status == "yes":
        depth = report.gorenstein_dim
    else:
        depth = PROBE_DEPTH
        notes.append(
            f"Gorenstein dimension not certified within bound {report.bound}; "
            f"seeding with syzygy depth {depth}"
        )
    registry = CanonicalRegistry()
    items = []
    certificates = []
    frontier = []
    unknown = False

    def consider(mod):
        # decompose, discard projectives, certify; returns newly found items
        nonlocal unknown
        for part, _mult in decompose(mod):
            if part.is_zero or is_projective(part):
                continue
            if part.total_dim > dim_cap:
                unknown = True
                notes.append(f"dimension cap {dim_cap} hit by a summand of dimension {part.total_dim}")
                continue
            idx = registry.classify(part)
            if idx < len(items):
                continue
            canonical = registry.reps[idx]
            cert = certify_gp(canonical)
            if cert.is_gp:
                items.append(canonical)
                certificates.append(cert)
                frontier.append(canonical)
            else:
                unknown = True
                notes.append(
                    f"summand of dims {canonical.dim_vector} not certified GP "
                    f"({cert.status}); discarded"
                )
                # keep registry and items aligned: drop the uncertified class
                registry.reps.pop(idx)

    for v in a.quiver.vertices:
        s = simple(a, v)
        seed = syzygy(s, depth) if depth else s
        consider(seed)
    rounds = 0
    while frontier and rounds < iter_cap:
        rounds += 1
        batch, frontier[:] = frontier[:], []
        for g in batch:
            consider(syzygy(g))
            cos = co_syzygy(g)
            consider(cos)
    if frontier:
        unknown = True
        notes.append(f"iteration cap {iter_cap} hit with catalog still growing")
    if unknown:
        verdict = "Unknown"
    elif items:
        verdict = "CMFinite"
    else:
        verdict = "CMFree"
    order = sorted(
        range(len(items)),
        key=lambda i: (items[i].total_dim, items[i].dim_vector, items[i].key()),
    )
    return GPCatalog(
        algebra=a,
        items=[items[i] for i in order],
        verdict=verdict,
        report=report,
        certificates=[certificates[i] for i in order],
        notes=notes,
    )
