"""Instance types for classically interacting fermionic Hamiltonians (CIFH).

A CIFH instance on n modes is specified by an interaction graph (w, E) with
nonnegative weights, on-site potentials mu, and a hopping graph (w', E').
Three sign/offset conventions are supported:

``traceless``
    H = sum_E w (1/4 - n_j n_k) + sum_j mu_j (n_j - 1/2)
        + sum_E' w' (-adag_j a_k - adag_k a_j)

``psd``
    H = sum_E w (1 - n_j n_k) + sum_j mu_j n_j
        + sum_E' w' (1 - adag_j a_k - adag_k a_j),   mu >= 0, w' >= 0

``fmc``  (fermionic max-cut)
    H = sum_E (w/2)(n_j + n_k - 2 n_j n_k - adag_j a_k - adag_k a_j)

The fmc form is stored through the same fields as the others with the
derived values mu_j = (1/2) sum_{k in E_j} w_jk and (w', E') = (w/2, E);
these identities are part of validation and must hold exactly.

Documents use 1-based mode indices; everything in memory is 0-based.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SCHEMA_VERSION = 1

Edge = tuple[int, int, float]


class Convention(str, Enum):
    TRACELESS = "traceless"
    PSD = "psd"
    FMC = "fmc"


class InstanceError(ValueError):
    """Raised for malformed instances; the message names the offending field."""


def _check_edges(edges: tuple[Edge, ...], n: int, name: str, nonneg: bool) -> None:
    seen: set[tuple[int, int]] = set()
    for i, edge in enumerate(edges):
        path = f"{name}[{i}]"
        if len(edge) != 3:
            raise InstanceError(f"{path}: expected [j, k, w]")
        j, k, w = edge
        if not (isinstance(j, int) and isinstance(k, int)):
            raise InstanceError(f"{path}: mode indices must be integers")
        if not (0 <= j < k < n):
            raise InstanceError(
                f"{path}: requires 0 <= j < k < n (got j={j}, k={k}, n={n})"
            )
        if (j, k) in seen:
            raise InstanceError(f"{path}: duplicate edge ({j}, {k})")
        seen.add((j, k))
        if not np.isfinite(w):
            raise InstanceError(f"{path}: non-finite weight")
        if nonneg and w < 0:
            raise InstanceError(f"{path}: negative interaction weight")


@dataclass(frozen=True)
class HamiltonianSplit:
    """The two pieces H = H_class + H_quad of one instance."""

    interaction_edges: tuple[Edge, ...]
    potentials: tuple[float, ...]
    hopping_edges: tuple[Edge, ...]
    convention: Convention


@dataclass(frozen=True)
class CifhInstance:
    """A validated CIFH instance.

    Attributes
    ----------
    n : number of fermionic modes.
    interaction_edges : tuples (j, k, w) with 0 <= j < k < n and w >= 0.
    potentials : length-n on-site potentials mu_j.
    hopping_edges : tuples (j, k, w') with 0 <= j < k < n, w' real.
    convention : sign/offset convention, see module docstring.
    particle_target : optional average particle number q for the
        fixed-particle problem, 0 <= q <= floor(n/2).
    """

    n: int
    interaction_edges: tuple[Edge, ...] = ()
    potentials: tuple[float, ...] = ()
    hopping_edges: tuple[Edge, ...] = ()
    convention: Convention = Convention.TRACELESS
    particle_target: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise InstanceError(f"n: must be a positive integer (got {self.n!r})")
        try:
            object.__setattr__(self, "convention", Convention(self.convention))
        except ValueError:
            raise InstanceError(
                f"convention: expected one of traceless|psd|fmc, got "
                f"{self.convention!r}"
            ) from None
        object.__setattr__(
            self,
            "interaction_edges",
            tuple((int(j), int(k), float(w)) for j, k, w in self.interaction_edges),
        )
        object.__setattr__(
            self,
            "hopping_edges",
            tuple((int(j), int(k), float(w)) for j, k, w in self.hopping_edges),
        )
        object.__setattr__(
            self, "potentials", tuple(float(m) for m in self.potentials)
        )
        _check_edges(self.interaction_edges, self.n, "interaction_edges", nonneg=True)
        _check_edges(self.hopping_edges, self.n, "hopping_edges", nonneg=False)
        if len(self.potentials) != self.n:
            raise InstanceError(
                f"potentials: expected length n={self.n}, got {len(self.potentials)}"
            )
        if not all(np.isfinite(m) for m in self.potentials):
            raise InstanceError("potentials: non-finite entry")
        if self.convention is Convention.PSD:
            for j, m in enumerate(self.potentials):
                if m < 0:
                    raise InstanceError(
                        f"potentials[{j}]: psd convention requires mu_j >= 0"
                    )
            for i, (_, _, w) in enumerate(self.hopping_edges):
                if w < 0:
                    raise InstanceError(
                        f"hopping_edges[{i}]: psd convention requires w' >= 0"
                    )
        if self.convention is Convention.FMC:
            self._check_fmc()
        if self.particle_target is not None:
            q = self.particle_target
            if not isinstance(q, int) or not (0 <= q <= self.n // 2):
                raise InstanceError(
                    f"particle_target: requires 0 <= q <= floor(n/2) (got {q!r})"
                )

    def _check_fmc(self) -> None:
        expect_hop = tuple((j, k, w / 2.0) for j, k, w in self.interaction_edges)
        if self.hopping_edges != expect_hop:
            raise InstanceError(
                "hopping_edges: fmc convention requires E' = E with w' = w/2 exactly"
            )
        if self.potentials != derived_fmc_potentials(self.n, self.interaction_edges):
            raise InstanceError(
                "potentials: fmc convention requires mu_j = (1/2) sum_k w_jk exactly"
            )

    # -- accessors ---------------------------------------------------------

    def split(self) -> HamiltonianSplit:
        return HamiltonianSplit(
            self.interaction_edges,
            self.potentials,
            self.hopping_edges,
            self.convention,
        )

    def interaction_total(self) -> float:
        """Sum of interaction weights, in canonical edge order."""
        return float(sum(w for _, _, w in self.interaction_edges))

    def degree_weights(self) -> np.ndarray:
        """W_j = sum of interaction weights incident on mode j."""
        out = np.zeros(self.n)
        for j, k, w in self.interaction_edges:
            out[j] += w
            out[k] += w
        return out


def derived_fmc_potentials(n: int, edges: tuple[Edge, ...]) -> tuple[float, ...]:
    """mu_j = (1/2) sum over incident edges, accumulated in edge order."""
    mu = [0.0] * n
    for j, k, w in edges:
        mu[j] += w / 2.0
        mu[k] += w / 2.0
    return tuple(mu)


def fmc_instance(n: int, edges: list[tuple[int, int, float]]) -> CifhInstance:
    """Build a fermionic-max-cut instance from an interaction graph alone."""
    canon = tuple((int(j), int(k), float(w)) for j, k, w in edges)
    return CifhInstance(
        n=n,
        interaction_edges=canon,
        potentials=derived_fmc_potentials(n, canon),
        hopping_edges=tuple((j, k, w / 2.0) for j, k, w in canon),
        convention=Convention.FMC,
    )


def edge_arrays(edges: tuple[Edge, ...]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an edge list into index/index/weight arrays for vectorized sums."""
    if not edges:
        return (
            np.zeros(0, dtype=np.intp),
            np.zeros(0, dtype=np.intp),
            np.zeros(0, dtype=float),
        )
    j = np.array([e[0] for e in edges], dtype=np.intp)
    k = np.array([e[1] for e in edges], dtype=np.intp)
    w = np.array([e[2] for e in edges], dtype=float)
    return j, k, w


# ---------------------------------------------------------------------------
# document round trip
# ---------------------------------------------------------------------------


def serialize_instance(inst: CifhInstance) -> str:
    """Canonical JSON document (1-based indices, fixed key order, UTF-8)."""
    doc: dict = {
        "version": SCHEMA_VERSION,
        "n": inst.n,
        "convention": inst.convention.value,
        "interaction_edges": [[j + 1, k + 1, w] for j, k, w in inst.interaction_edges],
        "potentials": list(inst.potentials),
        "hopping_edges": [[j + 1, k + 1, w] for j, k, w in inst.hopping_edges],
    }
    if inst.particle_target is not None:
        doc["particle_target"] = inst.particle_target
    return json.dumps(doc, ensure_ascii=False, separators=(", ", ": "), indent=1)


_KNOWN_KEYS = {
    "version",
    "n",
    "convention",
    "interaction_edges",
    "potentials",
    "hopping_edges",
    "particle_target",
}


def parse_instance(doc: str | dict) -> CifhInstance:
    """Parse a JSON instance document.

    Raises InstanceError with a message naming the offending field path.
    """
    if isinstance(doc, str):
        try:
            data = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"document: invalid JSON ({exc})") from exc
    else:
        data = doc
    if not isinstance(data, dict):
        raise InstanceError("document: expected a JSON object")
    for key in data:
        if key not in _KNOWN_KEYS:
            raise InstanceError(f"{key}: unknown field")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise InstanceError(f"version: expected {SCHEMA_VERSION}, got {version!r}")
    if "n" not in data:
        raise InstanceError("n: missing field")
    n = data["n"]
    if not isinstance(n, int):
        raise InstanceError(f"n: must be an integer (got {n!r})")
    conv_raw = data.get("convention", "traceless")
    try:
        conv = Convention(conv_raw)
    except ValueError:
        raise InstanceError(
            f"convention: expected one of traceless|psd|fmc, got {conv_raw!r}"
        ) from None

    def read_edges(name: str) -> tuple[Edge, ...]:
        raw = data.get(name, [])
        if not isinstance(raw, list):
            raise InstanceError(f"{name}: expected a list")
        out = []
        for i, item in enumerate(raw):
            if not (isinstance(item, list) and len(item) == 3):
                raise InstanceError(f"{name}[{i}]: expected [j, k, w]")
            j, k, w = item
            if not (isinstance(j, int) and isinstance(k, int)):
                raise InstanceError(f"{name}[{i}]: mode indices must be integers")
            if not (isinstance(w, (int, float)) and not isinstance(w, bool)):
                raise InstanceError(f"{name}[{i}]: weight must be a number")
            if not (1 <= j <= n and 1 <= k <= n):
                raise InstanceError(
                    f"{name}[{i}]: 1-based mode index out of range 1..{n}"
                )
            out.append((j - 1, k - 1, float(w)))
        return tuple(out)

    interaction = read_edges("interaction_edges")
    hopping = read_edges("hopping_edges")
    pots_raw = data.get("potentials", [])
    if not isinstance(pots_raw, list):
        raise InstanceError("potentials: expected a list")
    for i, m in enumerate(pots_raw):
        if not (isinstance(m, (int, float)) and not isinstance(m, bool)):
            raise InstanceError(f"potentials[{i}]: must be a number")
    q = data.get("particle_target")
    if q is not None and not isinstance(q, int):
        raise InstanceError(f"particle_target: must be an integer (got {q!r})")
    return CifhInstance(
        n=n,
        interaction_edges=interaction,
        potentials=tuple(float(m) for m in pots_raw),
        hopping_edges=hopping,
        convention=conv,
        particle_target=q,
    )


def instance_digest(inst: CifhInstance) -> str:
    """SHA-256 of the canonical serialization; stable across runs."""
    return hashlib.sha256(serialize_instance(inst).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def heisenberg_line4() -> CifhInstance:
    """Four-mode line whose traceless CIFH form matches the spin-1/2
    Heisenberg antiferromagnet on a 4-site chain under Jordan-Wigner."""
    edges = ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0))
    return CifhInstance(
        n=4,
        interaction_edges=edges,
        potentials=(0.5, 1.0, 1.0, 0.5),
        hopping_edges=((0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5)),
        convention=Convention.TRACELESS,
    )


def complete_dense(n: int, w: float = 1.0) -> CifhInstance:
    """Complete interaction graph, uniform weight w, potentials mu_j = w n / 2."""
    if n < 2:
        raise InstanceError("n: complete-dense generator needs n >= 2")
    edges = tuple((j, k, float(w)) for j in range(n) for k in range(j + 1, n))
    mu = tuple(w * n / 2.0 for _ in range(n))
    return CifhInstance(n=n, interaction_edges=edges, potentials=mu)


def _hubbard(
    sites: list[tuple[int, int]], n_sites: int, t: float, u: float, mu0: float
) -> CifhInstance:
    """Shared Hubbard builder; mode index = 2*site + spin (spin up = 0)."""
    n = 2 * n_sites
    interaction: list[Edge] = []
    if u != 0.0:
        interaction = [(2 * s, 2 * s + 1, float(u)) for s in range(n_sites)]
    hopping: list[Edge] = []
    if t != 0.0:
        for s, sp in sites:
            for spin in (0, 1):
                hopping.append((2 * s + spin, 2 * sp + spin, float(t)))
        hopping.sort(key=lambda e: (e[0], e[1]))
    return CifhInstance(
        n=n,
        interaction_edges=tuple(interaction),
        potentials=tuple(float(mu0) for _ in range(n)),
        hopping_edges=tuple(hopping),
    )


def hubbard_triangle(t: float = 1.0, u: float = 2.0, mu0: float = 0.0) -> CifhInstance:
    """Three-site Hubbard triangle, 6 modes: onsite interaction weight U
    (one disjoint edge per site), per-spin triangle hopping weight t."""
    return _hubbard([(0, 1), (0, 2), (1, 2)], 3, t, u, mu0)


def hubbard_chain(
    sites: int, t: float = 1.0, u: float = 2.0, mu0: float = 0.0
) -> CifhInstance:
    """Open Hubbard chain on `sites` sites (2*sites modes)."""
    if sites < 2:
        raise InstanceError("sites: hubbard-chain generator needs sites >= 2")
    return _hubbard([(s, s + 1) for s in range(sites - 1)], sites, t, u, mu0)


def named_graph(name: str, w: float = 1.0) -> tuple[int, list[tuple[int, int, float]]]:
    """Small named graphs for the CLI: lineK, cycleK, completeK, starK."""
    for prefix in ("line", "cycle", "complete", "star"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            k = int(name[len(prefix):])
            if k < 2:
                raise InstanceError(f"graph: {name!r} needs at least 2 vertices")
            if prefix == "line":
                return k, [(j, j + 1, w) for j in range(k - 1)]
            if prefix == "cycle":
                if k < 3:
                    raise InstanceError("graph: cycle needs at least 3 vertices")
                edges = [(j, j + 1, w) for j in range(k - 1)] + [(0, k - 1, w)]
                edges.sort()
                return k, edges
            if prefix == "complete":
                return k, [(j, l, w) for j in range(k) for l in range(j + 1, k)]
            return k, [(0, j, w) for j in range(1, k)]
    raise InstanceError(f"graph: unknown graph name {name!r}")


def random_instance(
    n: int,
    seed: int,
    convention: Convention = Convention.TRACELESS,
    p_edge: float = 0.5,
    p_hop: float = 0.5,
    bipartite: bool = False,
    zero_potentials: bool = False,
    particle_target: int | None = None,
) -> CifhInstance:
    """Seeded random instance; identical arguments give identical instances.

    Interaction weights are drawn uniformly from [0.2, 2.0]; hopping weights
    from [-1, 1] (traceless/fmc) or [0.2, 1.0] (psd); potentials from [-1, 1]
    (traceless) or [0, 1] (psd).  With bipartite=True the modes are split into
    even/odd halves and interaction edges only cross the split.
    """
    convention = Convention(convention)
    rng = np.random.default_rng(seed)
    side = np.arange(n) % 2  # even indices on one side, odd on the other
    interaction: list[Edge] = []
    for j in range(n):
        for k in range(j + 1, n):
            if bipartite and side[j] == side[k]:
                continue
            if rng.random() < p_edge:
                interaction.append((j, k, float(rng.uniform(0.2, 2.0))))
    if convention is Convention.FMC:
        return fmc_instance(n, interaction)
    hopping: list[Edge] = []
    for j in range(n):
        for k in range(j + 1, n):
            if rng.random() < p_hop:
                if convention is Convention.PSD:
                    wq = float(rng.uniform(0.2, 1.0))
                else:
                    wq = float(rng.uniform(-1.0, 1.0))
                hopping.append((j, k, wq))
    if zero_potentials:
        mu = tuple(0.0 for _ in range(n))
    elif convention is Convention.PSD:
        mu = tuple(float(rng.uniform(0.0, 1.0)) for _ in range(n))
    else:
        mu = tuple(float(rng.uniform(-1.0, 1.0)) for _ in range(n))
    return CifhInstance(
        n=n,
        interaction_edges=tuple(interaction),
        potentials=mu,
        hopping_edges=tuple(hopping),
        convention=convention,
        particle_target=particle_target,
    )


GENERATOR_KINDS = (
    "heisenberg-line4",
    "complete-dense",
    "hubbard-triangle",
    "hubbard-chain",
    "fmc-graph",
    "random",
)


def generate(kind: str, **params) -> CifhInstance:
    """Dispatch a named generator; `kind` is one of GENERATOR_KINDS."""
    if kind == "heisenberg-line4":
        return heisenberg_line4()
    if kind == "complete-dense":
        return complete_dense(int(params["n"]), float(params.get("w", 1.0)))
    if kind == "hubbard-triangle":
        return hubbard_triangle(
            float(params.get("t", 1.0)),
            float(params.get("u", 2.0)),
            float(params.get("mu0", 0.0)),
        )
    if kind == "hubbard-chain":
        return hubbard_chain(
            int(params["sites"]),
            float(params.get("t", 1.0)),
            float(params.get("u", 2.0)),
            float(params.get("mu0", 0.0)),
        )
    if kind == "fmc-graph":
        if "edges" in params:
            n = int(params["n"])
            edges = params["edges"]
        else:
            n, edges = named_graph(params["graph"], float(params.get("w", 1.0)))
        return fmc_instance(n, edges)
    if kind == "random":
        return random_instance(
            int(params["n"]),
            int(params["seed"]),
            Convention(params.get("convention", "traceless")),
            float(params.get("p_edge", 0.5)),
            float(params.get("p_hop", 0.5)),
            bool(params.get("bipartite", False)),
            bool(params.get("zero_potentials", False)),
            params.get("particle_target"),
        )
    raise InstanceError(f"kind: unknown generator {kind!r}")
