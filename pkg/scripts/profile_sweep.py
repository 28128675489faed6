#!/usr/bin/env python3
"""Sweep the fiber energy and tabulate the radial geometry of one member.

For a fixed base point and momentum direction, rescale the momentum so the
energy density walks a log-spaced grid, and print at each energy:

* the profile value v(t) and the admissibility factor a*sqrt(t) + 2 t v(t),
* gamma(t), the scalar whose vanishing certifies the Einstein equation,
* the Einstein defect |Ric - lambda G| of the member under study,
* the holomorphic sectional curvature of a fixed section, whose drift
  along the sweep exhibits the non-constancy of the generic member.

Examples:
    python3 scripts/profile_sweep.py
    python3 scripts/profile_sweep.py --dim 2 --curvature 2.0 --ka 0 --kb 1
    python3 scripts/profile_sweep.py --detune 0.05   # leave the family
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from cotangent_kahler import (
    AdaptedVector,
    CotangentPoint,
    ModelParams,
    assemble_complex_structure,
    assemble_metric,
    curvature_blocks,
    einstein_profile,
    family_einstein_constant,
    fiber_jets,
    gamma_factor,
    holomorphic_sectional_curvature,
    integrable_coupling,
    ricci_from_blocks,
)
from cotangent_kahler.profiles import VProfile


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=3, help="base dimension (default: 3)")
    parser.add_argument("--curvature", type=float, default=1.0, help="base curvature c > 0")
    parser.add_argument("--ka", type=float, default=1.0, help="decaying-mode weight")
    parser.add_argument("--kb", type=float, default=1.0, help="constant-mode weight")
    parser.add_argument(
        "--detune",
        type=float,
        default=0.0,
        help="admix this fraction of 1/(1+t) to the profile, leaving the family",
    )
    parser.add_argument("--t-min", type=float, default=0.1)
    parser.add_argument("--t-max", type=float, default=10.0)
    parser.add_argument("--steps", type=int, default=12, help="energies in the sweep")
    parser.add_argument("--seed", type=int, default=0, help="base point / section seed")
    return parser


def detuned_profile(member: VProfile, detune: float) -> VProfile:
    """Family member plus ``detune/(1+t)``: Einstein exactly when detune = 0."""
    return VProfile(
        kind=f"{member.kind} + {detune:g}/(1+t)",
        v=lambda t: member.v(t) + detune / (1.0 + t),
        dv=lambda t: member.dv(t) - detune / (1.0 + t) ** 2,
        d2v=lambda t: member.d2v(t) + 2.0 * detune / (1.0 + t) ** 3,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = ModelParams(
        n=args.dim,
        c=args.curvature,
        a_metric=integrable_coupling(args.curvature),
        k_a=args.ka,
        k_b=args.kb,
    )
    profile = detuned_profile(einstein_profile(params), args.detune)
    lam = family_einstein_constant(params)

    rng = np.random.default_rng(args.seed)
    q = rng.uniform(-1.0, 1.0, size=args.dim)
    direction = rng.normal(size=args.dim)
    direction /= np.linalg.norm(direction)
    section = AdaptedVector(rng.normal(size=args.dim), rng.normal(size=args.dim))

    print(
        f"n={args.dim}  c={args.curvature:g}  a={params.a_metric:.6g}  "
        f"k_a={args.ka:g}  k_b={args.kb:g}  detune={args.detune:g}  "
        f"family lambda={lam:g}"
    )
    header = f"{'t':>10}  {'v(t)':>12}  {'admissibility':>13}  {'gamma':>10}  {'einstein defect':>15}  {'hol. sect. curv.':>16}"
    print(header)
    print("-" * len(header))

    ts = np.geomspace(args.t_min, args.t_max, args.steps)
    base = CotangentPoint.at(q, direction, params)
    for t in ts:
        p = direction * math.sqrt(t / base.t)
        pt = CotangentPoint.at(q, p, params)
        jets = fiber_jets(pt, params, profile)
        blocks = curvature_blocks(pt, params, jets)
        ricci = ricci_from_blocks(blocks)
        defect = max(
            float(np.max(np.abs(ricci.hh - lam * jets.gh))),
            float(np.max(np.abs(ricci.vv - lam * jets.gv))),
        )
        hsc = holomorphic_sectional_curvature(
            blocks, assemble_metric(jets), assemble_complex_structure(jets), section
        )
        v = float(profile.v(np.asarray(t)))
        admissibility = params.a_metric * math.sqrt(t) + 2.0 * t * v
        gamma = float(gamma_factor(params, profile, np.asarray([t]))[0])
        print(
            f"{t:>10.4f}  {v:>12.6g}  {admissibility:>13.6g}  {gamma:>10.2e}  "
            f"{defect:>15.3e}  {hsc:>16.8f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
