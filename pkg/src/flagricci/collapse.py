"""Collapse verification: kernel summands, subalgebra tests, cloud distances.

A degenerate coefficient vector on the simplex kills one or two summands.
The killed directions assemble to a genuine homogeneous limit exactly when
k + (killed summands) closes under the bracket; otherwise the limit is not a
homogeneous space for the same group and the verdict is non_realizable, with
a concrete bracket witness. collapse_run follows a flow trajectory into such
a limit and measures Hausdorff distances between sampled orbit clouds and the
limit cloud.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .fields import cone_form
from .flags import FlagSpec
from .flow import Trajectory, integrate
from .orbits import LieModel, OrbitCloud, sample_orbit
from .realize import realizing_frame


def hausdorff(a: OrbitCloud, b: OrbitCloud) -> float:
    """Hausdorff distance between two clouds in the same ambient algebra.

    Exact max-min over both directions, in the metric induced by the
    negative Killing form.
    """
    if a.n_ambient != b.n_ambient or a.points.shape[1:] != b.points.shape[1:]:
        raise ValueError("clouds live in different ambient spaces")
    d = cdist(a.flat_points, b.flat_points)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def sampling_resolution(cloud: OrbitCloud) -> float:
    """Median nearest-neighbor distance within a cloud."""
    pts = cloud.flat_points
    d = cdist(pts, pts)
    np.fill_diagonal(d, np.inf)
    return float(np.median(d.min(axis=1)))


def kernel_summands(x, tol: float = 1e-8) -> tuple[int, ...]:
    """1-based indices of coefficients at or below tol."""
    x = np.asarray(x, dtype=float)
    return tuple(int(i) + 1 for i in range(3) if x[i] <= tol)


def is_subalgebra(model: LieModel, summand_indices, tol: float = 1e-9):
    """Whether k plus the selected summands closes under the bracket.

    Returns (True, None) or (False, witness); the witness records the basis
    pair whose bracket leaks into a complementary summand, the summand it
    leaks into, and the residual norm.
    """
    selected = sorted(set(int(i) for i in summand_indices))
    if any(i not in (1, 2, 3) for i in selected):
        raise ValueError("summand indices must be among 1, 2, 3")
    members = [("k", j, b) for j, b in enumerate(model.isotropy_basis)]
    for i in selected:
        members.extend(
            ("m%d" % i, j, b) for j, b in enumerate(model.summand_bases[i - 1])
        )
    complement = [i for i in (1, 2, 3) if i not in selected]
    if not complement:
        return True, None

    norm2 = 4.0 * model.n_ambient
    comp_bases = [(i, model.summand_bases[i - 1]) for i in complement]
    for ai in range(len(members)):
        tag_a, idx_a, xa = members[ai]
        for bi in range(ai + 1, len(members)):
            tag_b, idx_b, xb = members[bi]
            br = xa @ xb - xb @ xa
            scale = max(1.0, float(np.sqrt(2 * model.n_ambient) * np.linalg.norm(br)))
            worst = (0.0, None)
            for i, basis in comp_bases:
                res2 = 0.0
                for e in basis:
                    res2 += model.inner(br, e) ** 2 / norm2
                if res2 > worst[0]:
                    worst = (res2, i)
            residual = float(np.sqrt(worst[0]))
            if residual > tol * scale:
                witness = {
                    "first": "%s[%d]" % (tag_a, idx_a),
                    "second": "%s[%d]" % (tag_b, idx_b),
                    "leaks_into": worst[1],
                    "residual": residual,
                }
                return False, witness
    return True, None


@dataclass
class CollapseVerdict:
    """Realizability verdict for a degenerate limit coefficient vector."""

    point: np.ndarray
    kernel: tuple[int, ...]
    verdict: str  # realizable | non_realizable | no_collapse
    witness: dict | None

    def as_dict(self) -> dict:
        witness = self.witness
        if witness is not None:
            witness = {
                k: (v.tolist() if isinstance(v, np.ndarray) else v)
                for k, v in witness.items()
            }
        return {
            "point": [float(v) for v in self.point],
            "kernel": list(self.kernel),
            "verdict": self.verdict,
            "witness": witness,
        }


def collapse_verdict(model: LieModel, x_limit, tol: float = 1e-8) -> CollapseVerdict:
    """Classify a limit point: no_collapse, realizable, or non_realizable.

    Realizable verdicts attach the realizing frame at the limit when the
    point lies on the realizable disk; non_realizable ones attach the
    bracket witness.
    """
    x_limit = np.asarray(x_limit, dtype=float)
    kernel = kernel_summands(x_limit, tol)
    if not kernel:
        return CollapseVerdict(x_limit, kernel, "no_collapse", None)
    ok, witness = is_subalgebra(model, kernel)
    if not ok:
        return CollapseVerdict(x_limit, kernel, "non_realizable", witness)
    data = None
    if float(cone_form(x_limit)) <= tol:
        frame = realizing_frame(np.clip(x_limit, 0.0, None), tol=1e-8)
        data = {
            "tau": frame,
            "h1_omega_coords": frame[:, 0].copy(),
            "h2_omega_coords": frame[:, 1].copy(),
        }
    return CollapseVerdict(x_limit, kernel, "realizable", data)


class NonRealizableError(RuntimeError):
    """Raised when a flow limit cannot be realized as a homogeneous collapse."""

    def __init__(self, message, verdict: CollapseVerdict):
        super().__init__(message)
        self.verdict = verdict


@dataclass
class CollapseRun:
    """Orbit-cloud convergence data along one collapsing trajectory."""

    times: np.ndarray
    states: np.ndarray
    distances: np.ndarray
    resolution: float
    x_limit: np.ndarray
    verdict: CollapseVerdict
    trajectory: Trajectory

    def profile_ok(self, allowance: float = 0.1) -> bool:
        """Distances non-increasing within allowance * initial, tail below 2x resolution."""
        d = self.distances
        slack = allowance * d[0]
        monotone = bool(np.all(d[1:] <= d[:-1] + slack))
        return monotone and d[-1] <= 2.0 * self.resolution


def collapse_run(
    spec: FlagSpec,
    model: LieModel,
    x0,
    times,
    count: int = 2000,
    seed: int = 0,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    settle_time: float = 400.0,
    kernel_tol: float = 1e-8,
) -> CollapseRun:
    """Integrate from x0, realize the states at the given times, and compare
    their orbit clouds against the limit cloud.

    x0 must lie on the realizable disk. The trajectory's limit must collapse
    to a realizable degenerate point (an edge-midpoint type limit); vertices
    and interior limits raise NonRealizableError carrying the verdict. The
    same counter-based seed is used for every cloud, so distances compare
    identical Haar samples applied to different frames.
    """
    times = np.unique(np.array([float(t) for t in times]))
    if len(times) == 0:
        raise ValueError("need at least one sample time")
    if times[0] < 0:
        raise ValueError("sample times must be nonnegative")
    x0 = np.asarray(x0, dtype=float)
    if float(cone_form(x0)) > 1e-9:
        raise ValueError("x0 is outside the realizable disk (F > 0)")

    t_end = max(float(times[-1]), settle_time)
    traj = integrate(spec, x0, t_max=t_end, rtol=rtol, atol=atol, t_eval=times)
    # snap integration fuzz in the dead coordinates to exact zero, so the
    # limit cloud is the genuinely degenerate orbit
    x_limit = traj.final_state.copy()
    x_limit[x_limit <= kernel_tol] = 0.0
    x_limit /= x_limit.sum()
    verdict = collapse_verdict(model, x_limit, tol=kernel_tol)
    if verdict.verdict != "realizable":
        if verdict.verdict == "no_collapse":
            msg = (
                "trajectory limit %r keeps all summands positive; nothing collapses"
                % (np.round(x_limit, 6).tolist(),)
            )
        else:
            w = verdict.witness
            msg = (
                "trajectory limit %r is not realizable: [%s, %s] leaks into m%d "
                "(residual %.3e)"
                % (
                    np.round(x_limit, 6).tolist(),
                    w["first"],
                    w["second"],
                    w["leaks_into"],
                    w["residual"],
                )
            )
        raise NonRealizableError(msg, verdict)

    def cloud_at(x):
        frame = realizing_frame(np.clip(x, 0.0, None), tol=1e-8)
        h1 = model.torus_element(frame[:, 0])
        h2 = model.torus_element(frame[:, 1])
        return sample_orbit(model, h1, h2, count, seed)

    limit_cloud = cloud_at(x_limit)
    resolution = sampling_resolution(limit_cloud)
    times = traj.eval_times
    states = traj.eval_states
    distances = np.array([hausdorff(cloud_at(x), limit_cloud) for x in states])
    return CollapseRun(times, states, distances, resolution, x_limit, verdict, traj)
