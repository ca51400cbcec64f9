"""The defectsum command line: validate, compute, fuzz, emit examples.

Exit codes: 0 success, 1 validation or invariance failure, 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from defectsum import algebra as alg
from defectsum import io as dio
from defectsum import moves as mv
from defectsum import statesum as ss
from defectsum import surfaces as sf
from defectsum import twisting as tw
from defectsum.algebra import CyclotomicNumber


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    seed: int | None
    kappa: int
    normalization: str
    z_exact: dict
    z_decimal: str
    twisted: bool
    move_log: str | None
    wall_time_s: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)


def _digest(paths: list[tuple[str, str]]) -> str:
    h = hashlib.sha256()
    for flag, path in sorted(paths):
        h.update(flag.encode())
        h.update(Path(path).read_bytes())
    return h.hexdigest()


def _decimal(value) -> str:
    if isinstance(value, Fraction):
        return f"{float(value):.15g}"
    z = value.to_complex()
    if abs(z.imag) < 1e-12:
        return f"{z.real:.15g}"
    return f"{z.real:.15g}{z.imag:+.15g}i"


def _exact_payload(value) -> dict:
    if isinstance(value, Fraction):
        return {"rational": str(value)}
    return {
        "modulus": value.modulus,
        "coeffs": [str(c) for c in value.coeffs],
    }


def _load_gauge(args) -> ss.GaugeData:
    group = dio.load_group(args.group)
    curve_group = dio.load_group(args.hgroup) if args.hgroup else alg.cyclic_group(1)
    if args.biset:
        biset = dio.load_biset(args.biset, group, curve_group)
    else:
        biset = alg.trivial_biset(group, curve_group)
    twisting = None
    if getattr(args, "twisting", None):
        twisting = dio.load_twisting(args.twisting, group, curve_group, biset)
    return ss.GaugeData(group, curve_group, biset, twisting)


def cmd_validate_complex(args) -> int:
    try:
        c = dio.load_complex(args.complex)
    except sf.ComplexError as err:
        print(f"INVALID complex: {err} (witness {err.witness})")
        return 1
    print(
        f"ok: V={c.vertex_count} E={len(c.edges)} F={len(c.triangles)} "
        f"chi={c.euler_characteristic()} curve_components={c.curve_component_count()}"
    )
    return 0


def cmd_validate_twisting(args) -> int:
    group = dio.load_group(args.group)
    curve_group = dio.load_group(args.hgroup)
    biset = dio.load_biset(args.biset, group, curve_group)
    try:
        t = dio.load_twisting(args.twisting, group, curve_group, biset)
    except tw.ConditionViolated as err:
        print("INVALID twisting:")
        for cond, witness in err.witnesses:
            print(f"  condition ({cond}) fails at {witness}")
        return 1
    print(f"ok: twisting over modulus {t.modulus} satisfies conditions (1)-(4)")
    return 0


def cmd_compute(args) -> int:
    t0 = time.time()
    c = dio.load_complex(args.complex)
    data = _load_gauge(args)
    ordering = sf.default_ordering(c)
    kappa = ss.count_admissible(c, ordering, data, jobs=args.jobs)
    norm = ss.normalization(c, data)
    if data.twisting is not None:
        z = ss.invariant_twisted(c, ordering, data, jobs=args.jobs)
    else:
        z = ss.invariant_untwisted(c, ordering, data, jobs=args.jobs)
        if args.modulus:
            # report the rational invariant embedded in the requested field
            z = CyclotomicNumber.from_rational(z, args.modulus)
    paths = [("complex", args.complex), ("group", args.group)]
    for flag in ("hgroup", "biset", "twisting"):
        if getattr(args, flag, None):
            paths.append((flag, getattr(args, flag)))
    report = RunReport(
        command="compute",
        inputs_digest=_digest(paths),
        seed=None,
        kappa=kappa,
        normalization=str(norm),
        z_exact=_exact_payload(z),
        z_decimal=_decimal(z),
        twisted=data.twisting is not None,
        move_log=None,
        wall_time_s=round(time.time() - t0, 6),
    )
    print(f"kappa = {kappa}")
    print(f"normalization = {norm}")
    kind = "twisted" if report.twisted else "untwisted"
    print(f"Z ({kind}) = {report.z_exact} = {report.z_decimal}")
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
        print(f"report written to {args.out}")
    return 0


def cmd_fuzz(args) -> int:
    c = dio.load_complex(args.complex)
    data = _load_gauge(args)
    ordering = sf.default_ordering(c)

    def invariant(cc, oo):
        if data.twisting is not None:
            return ss.invariant_twisted(cc, oo, data, jobs=args.jobs)
        return ss.invariant_untwisted(cc, oo, data, jobs=args.jobs)

    z0 = invariant(c, ordering)
    print(f"initial Z = {_decimal(z0)}; running {args.trials} trials x {args.steps} steps")
    conserved = (c.euler_characteristic(), c.curve_component_count())
    for trial in range(args.trials):
        seed = args.seed + trial
        walk = mv.random_flag_like_walk(
            c, ordering, args.steps, seed=seed, max_extra_vertices=args.max_growth
        )
        for i, step in enumerate(walk):
            now = (
                step.complex.euler_characteristic(),
                step.complex.curve_component_count(),
            )
            z = invariant(step.complex, step.ordering)
            if z != z0 or now != conserved:
                reason = "invariant changed" if z != z0 else "conservation broken"
                print(f"FAIL trial={trial} seed={seed} step={i}: {reason}")
                log = [s.record.to_json() for s in walk[: i + 1]]
                text = "\n".join(json.dumps(r) for r in log)
                if args.out:
                    Path(args.out).write_text(text + "\n")
                    print(f"minimal reproducing move log written to {args.out}")
                else:
                    print(text)
                return 1
        print(f"trial {trial} (seed {seed}): {len(walk)} steps, Z stable")
    print("all trials passed")
    return 0


EXAMPLES = {}


def _example(name):
    def wrap(fn):
        EXAMPLES[name] = fn
        return fn

    return wrap


@_example("tetrahedron")
def _ex_tetra(out: Path):
    dio.save_complex(sf.tetrahedron_sphere(), out / "complex.json")
    dio.save_group(alg.cyclic_group(2), out / "group.json")
    dio.save_group(alg.cyclic_group(1), out / "hgroup.json")
    dio.save_biset(alg.trivial_biset(alg.cyclic_group(2)), out / "biset.json")


@_example("torus7")
def _ex_torus7(out: Path):
    dio.save_complex(sf.torus_7vertex(), out / "complex.json")
    dio.save_group(alg.cyclic_group(2), out / "group.json")
    dio.save_group(alg.cyclic_group(1), out / "hgroup.json")
    dio.save_biset(alg.trivial_biset(alg.cyclic_group(2)), out / "biset.json")


@_example("octahedron-equator")
def _ex_octa(out: Path):
    z2 = alg.cyclic_group(2)
    x = alg.regular_biset(z2, [0, 1], [0, 1], [0, 1])
    sign = [ch for ch in alg.characters_of(z2, 2) if not ch.is_trivial()][0]
    triple = tw.from_characters(x, [sign], [sign], 2)
    dio.save_complex(sf.sphere_octahedron_equator(), out / "complex.json")
    dio.save_group(z2, out / "group.json")
    dio.save_group(z2, out / "hgroup.json")
    dio.save_biset(x, out / "biset.json")
    dio.save_twisting(triple, out / "twisting.json")


@_example("torus-grid33")
def _ex_grid(out: Path):
    z3 = alg.cyclic_group(3)
    x = alg.regular_biset(z3, range(3), range(3), range(3))
    chars = alg.characters_of(z3, 3)
    triple = tw.from_characters(x, [chars[1]], [chars[1]], 3)
    dio.save_complex(sf.torus_grid(3, 3, 0), out / "complex.json")
    dio.save_group(z3, out / "group.json")
    dio.save_group(z3, out / "hgroup.json")
    dio.save_biset(x, out / "biset.json")
    dio.save_twisting(triple, out / "twisting.json")


@_example("example1-klein")
def _ex_klein(out: Path):
    k4 = tw.klein_four_group()
    hat = tw.group_2cocycle_zn_zn(2, 1, 2)
    triple = tw.restrict_from_group_cocycle(k4, hat, range(4), range(4), range(4), 2)
    dio.save_complex(sf.sphere_octahedron_equator(), out / "complex.json")
    dio.save_group(k4, out / "group.json")
    dio.save_group(k4, out / "hgroup.json")
    dio.save_biset(triple.biset, out / "biset.json")
    dio.save_twisting(triple, out / "twisting.json")


def cmd_examples(args) -> int:
    if args.name not in EXAMPLES:
        print(f"unknown example {args.name!r}; available: {', '.join(sorted(EXAMPLES))}")
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    EXAMPLES[args.name](out)
    for p in sorted(out.iterdir()):
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectsum",
        description="State-sum invariants of surfaces with a defect curve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-complex", help="check a triangulated surface file")
    p.add_argument("--complex", required=True)
    p.set_defaults(fn=cmd_validate_complex)

    p = sub.add_parser("validate-twisting", help="check twisting conditions (1)-(4)")
    p.add_argument("--group", required=True)
    p.add_argument("--hgroup", required=True)
    p.add_argument("--biset", required=True)
    p.add_argument("--twisting", required=True)
    p.set_defaults(fn=cmd_validate_twisting)

    p = sub.add_parser("compute", help="compute the invariant of a complex")
    p.add_argument("--complex", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--hgroup")
    p.add_argument("--biset")
    p.add_argument("--twisting")
    p.add_argument("--modulus", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("fuzz", help="verify move invariance on random walks")
    p.add_argument("--complex", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--hgroup")
    p.add_argument("--biset")
    p.add_argument("--twisting")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-growth", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("examples", help="write a named example fixture set")
    p.add_argument("name")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_examples)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (dio.FormatError, json.JSONDecodeError, FileNotFoundError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    except (sf.ComplexError, tw.TwistingError, alg.AlgebraError, ss.InvalidGaugeData,
            ss.InvalidTwisting, mv.MoveError) as err:
        print(f"validation error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
