"""Projection chains between planning spaces.

A chain is a sequence of levels X_0 ... X_K, level K being the full problem.
Each level above 0 projects onto the one below, either by dropping factors
(for example SE(2) onto the plane, or a truncated arm) or by the identity on
coordinates with a simplified robot body. The admissibility requirement is
that a collision-free configuration upstairs projects to a collision-free
one downstairs; `check_admissibility` probes it by sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cspace import Path, PlanningSpace, dedup_waypoints

IDENTITY = "identity"
DROP_FACTORS = "drop_factors"


class BundleLevel:
    """One level of a chain: a planning space plus the projection below it.

    For level 0 there is no base and the projection kind is ignored.
    """

    def __init__(self, ps: PlanningSpace, projection_kind: str = IDENTITY, drop=()):
        self.ps = ps
        self.projection_kind = projection_kind
        self.drop = tuple(sorted(int(i) for i in drop))
        if projection_kind not in (IDENTITY, DROP_FACTORS):
            raise ValueError(f"unknown projection kind {projection_kind!r}")
        if projection_kind == DROP_FACTORS:
            if not self.drop:
                raise ValueError("drop_factors projection needs at least one index")
            if any(i < 0 or i >= ps.space.dim for i in self.drop):
                raise ValueError("dropped factor index out of range")
        keep = [i for i in range(ps.space.dim) if i not in self.drop]
        self.keep = np.array(keep if projection_kind == DROP_FACTORS else range(ps.space.dim))


class FiberBundleChain:
    """Levels ordered 0..K; level K is the full problem."""

    def __init__(self, levels):
        self.levels = list(levels)
        if not self.levels:
            raise ValueError("chain needs at least one level")
        for k in range(1, len(self.levels)):
            lv = self.levels[k]
            base = self.levels[k - 1]
            projected = [lv.ps.space.factors[i] for i in lv.keep]
            base_factors = list(base.ps.space.factors)
            if [type(f) for f in projected] != [type(f) for f in base_factors] or list(projected) != base_factors:
                raise ValueError(f"level {k} projection does not match the base space")

    @property
    def K(self) -> int:
        return len(self.levels) - 1

    def space(self, k: int) -> PlanningSpace:
        return self.levels[k].ps

    def project_config(self, x: np.ndarray, k: int) -> np.ndarray:
        """Project a level-k configuration one level down."""
        if k <= 0:
            raise ValueError("level 0 has no base to project onto")
        return np.asarray(x, dtype=float)[..., self.levels[k].keep]

    def project_config_to(self, x: np.ndarray, k_from: int, k_to: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        for k in range(k_from, k_to, -1):
            x = self.project_config(x, k)
        return x

    def project_path(self, path: Path, k_from: int, k_to: int) -> Path:
        """Project a path down the chain, dropping consecutive duplicates."""
        wp = path.waypoints
        for k in range(k_from, k_to, -1):
            wp = wp[:, self.levels[k].keep]
        wp = dedup_waypoints(wp, self.space(k_to).space)
        return Path(wp, self.space(k_to).space, level=k_to)

    def sample_fiber(self, base_x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
        """Lift a level-(k-1) configuration to level k, filling dropped
        factors uniformly at random."""
        lv = self.levels[k]
        space = lv.ps.space
        x = np.empty(space.dim)
        x[lv.keep] = base_x
        if lv.projection_kind == DROP_FACTORS:
            drop = np.array(lv.drop)
            x[drop] = rng.uniform(space.lows[drop], space.highs[drop])
        return x

    def sample_fiber_many(self, base_X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
        lv = self.levels[k]
        space = lv.ps.space
        X = np.empty((len(base_X), space.dim))
        X[:, lv.keep] = base_X
        if lv.projection_kind == DROP_FACTORS:
            drop = np.array(lv.drop)
            X[:, drop] = rng.uniform(space.lows[drop], space.highs[drop], size=(len(base_X), len(drop)))
        return X


@dataclass
class AdmissibilityReport:
    n_samples: int
    violations: int
    examples: list

    @property
    def ok(self) -> bool:
        return self.violations == 0


def check_admissibility(chain: FiberBundleChain, n_samples: int = 10000, seed: int = 0) -> list:
    """Sample each level k >= 1 and flag free configurations whose projection
    collides one level down. Returns one report per projection."""
    reports = []
    for k in range(1, chain.K + 1):
        rng = np.random.default_rng(seed + k)
        upper = chain.space(k)
        lower = chain.space(k - 1)
        X = upper.space.sample(rng, n_samples)
        free_upper = ~upper.phi_batch(X)
        Xb = chain.project_config(X[free_upper], k)
        bad_lower = lower.phi_batch(Xb)
        idx = np.nonzero(bad_lower)[0]
        examples = [Xb[i] for i in idx[:5]]
        reports.append(AdmissibilityReport(n_samples, int(bad_lower.sum()), examples))
    return reports
