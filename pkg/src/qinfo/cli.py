"""Command-line surface.

Exit codes: 0 success, 2 validation error, 3 failed acceptance check in
--check mode, 64 unknown subcommand.  QINFO_SEED overrides the default
seed; every CSV emission starts with a `# seed=` comment so reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CHECK_FAILED = 3
EXIT_USAGE = 64


def _default_seed():
    env = os.environ.get("QINFO_SEED")
    return int(env) if env else 0


def _fmt(x):
    return repr(float(x))


def _print_csv(header, rows, seed):
    print(f"# seed={seed}")
    print(",".join(header))
    for row in rows:
        print(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))


def _print_table(header, rows):
    widths = [
        max(len(str(h)), *(len(_cell(r[i])) for r in rows)) if rows else len(str(h))
        for i, h in enumerate(header)
    ]
    print("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(_cell(v).ljust(w) for v, w in zip(row, widths)))


def _cell(v):
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _parse_channel_spec(spec):
    from . import fileio, ops

    if os.path.exists(spec):
        obj = fileio.load(spec)
        if not hasattr(obj, "kraus"):
            raise fileio.FormatError("file does not contain a channel payload")
        return obj
    name, _, args = spec.partition(":")
    values = [float(a) for a in args.split(",") if a] if args else []
    param_names = {
        "bit_flip": ["p"],
        "phase_flip": ["p"],
        "depolarizing": ["p"],
        "amplitude_damping": ["gamma"],
        "erasure": ["epsilon"],
        "phase_erasure": ["delta"],
        "erasure_phase_erasure": ["epsilon", "delta"],
        "identity": [],
        "decohere": [],
        "pauli_randomizer": [],
    }
    if name not in param_names:
        raise ValueError(f"unknown channel spec '{spec}'")
    expected = param_names[name]
    if len(values) != len(expected):
        raise ValueError(f"channel '{name}' expects {len(expected)} parameter(s)")
    return ops.standard_channel(name, **dict(zip(expected, values)))


def cmd_entropy(args):
    from . import entropy, fileio

    rho = fileio.load(args.state)
    fileio.validate_density(rho)
    rows = [("vn_entropy_bits", float(entropy.vn_entropy(rho)))]
    if args.csv:
        _print_csv(["quantity", "value"], rows, args.seed)
    else:
        _print_table(["quantity", "value"], rows)
    return EXIT_OK


def cmd_distance(args):
    from . import fileio, metrics

    rho = fileio.load(args.a)
    sigma = fileio.load(args.b)
    derived = metrics.derived_metrics(rho, sigma)
    rows = [
        ("absolute_distance", metrics.absolute_distance(rho, sigma)),
        ("fidelity", metrics.fidelity(rho, sigma)),
        ("angle", derived["angle"]),
        ("error", derived["error"]),
    ]
    if args.csv:
        _print_csv(["metric", "value"], rows, args.seed)
    else:
        _print_table(["metric", "value"], rows)
    return EXIT_OK


def cmd_channel_apply(args):
    from . import fileio, ops

    chan = _parse_channel_spec(args.channel)
    rho = fileio.load(args.state)
    out, prob = ops.apply(chan, rho)
    if args.out:
        fileio.save(args.out, out / prob if prob > 0 else out)
        print(f"probability={_fmt(prob)} -> {args.out}")
    else:
        print(f"probability={_fmt(prob)}")
        print(fileio.serialize_matrix(out / prob if prob > 0 else out), end="")
    return EXIT_OK


def cmd_tomography_run(args):
    from . import fileio, tomography

    chan = _parse_channel_spec(args.channel)
    result = tomography.simulate_tomography(chan, mode=args.mode)
    print("# chi matrix")
    print(fileio.serialize_matrix(result.chi), end="")
    print(f"# residual={_fmt(result.residual)}")
    for i, k in enumerate(result.kraus):
        print(f"# kraus[{i}]")
        print(fileio.serialize_matrix(k), end="")
    return EXIT_OK


def cmd_thermal_curve(args):
    from . import entangle

    ts = np.linspace(args.tmin, args.tmax, args.steps)
    rows = []
    for t in ts:
        model = entangle.ThermalModel(args.b, float(t))
        c = entangle.thermal_concurrence(model)
        rows.append((float(t), float(c), float(entangle.eof_from_concurrence(c))))
    if args.csv:
        _print_csv(["temperature", "concurrence", "eof"], rows, args.seed)
    else:
        _print_table(["temperature", "concurrence", "eof"], rows)
    return EXIT_OK


def cmd_compress_sweep(args):
    from . import compress

    src = compress.IIDSource(np.diag([args.p0, 1 - args.p0]).astype(complex))
    rows = []
    for n in args.ns:
        sub = compress.typical_projector(src, n, args.epsilon)
        rows.append(
            (n, float(sub.mass), float(sub.rank_exponent), float(sub.mass ** 2))
        )
    header = ["n", "mass", "rank_exponent", "fidelity"]
    if args.csv:
        _print_csv(header, rows, args.seed)
    else:
        _print_table(header, rows)
    return EXIT_OK


def cmd_qec_demo(args):
    from . import ops, qec

    code = qec.make_code(args.code)
    print(f"code: {code.name} ({code.n_physical} physical qubits)")
    print("syndrome classes:", ", ".join(code.recovery_names))
    flip = ops.standard_channel("bit_flip", p=args.p)
    noise = flip
    for _ in range(code.n_physical - 1):
        noise = ops.tensor_ops(noise, flip)
    half = np.eye(2, dtype=complex) / 2
    _, fid = qec.correct_cycle(code, noise, half)
    print(f"i.i.d. flip(p={args.p}) cycle fidelity at I/2: {_fmt(fid)}")
    single = ops.quantum_op(
        [np.sqrt(1 - 3 * args.p) * np.eye(2 ** code.n_physical, dtype=complex)]
        + [
            np.sqrt(args.p) * qec._lift_mat(ops.SIGMA_X, code.n_physical, i)
            for i in range(3)
        ],
        (2,) * code.n_physical,
        (2,) * code.n_physical,
    ) if args.code == "bit_flip" and args.p < 1 / 3 else None
    if single is not None:
        p_code = code.code_projector / 2
        reversal = qec.construct_reversal(single, p_code)
        ledger = qec.demon_accounting(reversal, single(p_code), "canonical")
        print(
            "demon ledger (canonical): "
            f"H={_fmt(ledger.shannon_record)} Se={_fmt(ledger.entropy_exchange)} "
            f"dSc={_fmt(ledger.delta_s_correction)} total={_fmt(ledger.total)}"
        )
    return EXIT_OK


def cmd_capacity_estimate(args):
    from . import capacity, fileio

    chan = _parse_channel_spec(args.channel)
    est = capacity.coherent_info_max(
        chan, n=args.block, restarts=args.restarts, seed=args.seed
    )
    print(f"coherent-information lower bound (n={args.block}): {_fmt(est.value)}")
    print("# argmax state")
    print(fileio.serialize_matrix(est.argmax_state), end="")
    return EXIT_OK


def cmd_protocols(args):
    from . import protocols
    from .core import projector
    from .sampling import random_pure, rng_from

    if args.which == "superdense":
        decoded = protocols.superdense(args.bits)
        print(f"sent={args.bits} decoded={decoded}")
        return EXIT_OK
    rng = rng_from(args.seed)
    psi = random_pure(2, rng)
    bob, bits, prob = protocols.teleport(psi, seed=args.seed)
    overlap = float(np.real(psi.conj() @ bob @ psi))
    rows = [(f"{bits[0]}{bits[1]}", float(prob), overlap)]
    _print_table(["branch", "probability", "output_fidelity"], rows)
    return EXIT_OK


def cmd_fuzz(args):
    from .acceptance import criterion_9_inequality_fuzz

    ok, detail = criterion_9_inequality_fuzz(samples=args.samples)
    print(detail)
    print("status:", "ok" if ok else "violations found")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="qinfo", description=__doc__)
    parser.add_argument("--seed", type=int, default=_default_seed())
    parser.add_argument(
        "--check", action="store_true", help="run the acceptance suite and exit"
    )
    # --seed is accepted before or after the subcommand; SUPPRESS keeps
    # whichever value was actually given
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("entropy", help="von Neumann entropy of a state file", parents=[common])
    p.add_argument("--state", required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("distance", help="distance measures between two states", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=cmd_distance)

    p = sub.add_parser("channel", help="channel operations")
    chan_sub = p.add_subparsers(dest="channel_command", required=True)
    pa = chan_sub.add_parser("apply", parents=[common])
    pa.add_argument("--channel", required=True, help="file or name:params spec")
    pa.add_argument("--state", required=True)
    pa.add_argument("--out")
    pa.set_defaults(fn=cmd_channel_apply)

    p = sub.add_parser("tomography", help="process tomography")
    tomo_sub = p.add_subparsers(dest="tomography_command", required=True)
    pt = tomo_sub.add_parser("run", parents=[common])
    pt.add_argument("--channel", required=True)
    pt.add_argument("--mode", choices=["complete", "incomplete"], default="complete")
    pt.set_defaults(fn=cmd_tomography_run)

    p = sub.add_parser("entangle", help="entanglement tools")
    ent_sub = p.add_subparsers(dest="entangle_command", required=True)
    pe = ent_sub.add_parser("thermal-curve", parents=[common])
    pe.add_argument("--b", type=float, required=True)
    pe.add_argument("--tmin", type=float, default=0.05)
    pe.add_argument("--tmax", type=float, default=3.0)
    pe.add_argument("--steps", type=int, default=100)
    pe.add_argument("--csv", action="store_true")
    pe.set_defaults(fn=cmd_thermal_curve)

    p = sub.add_parser("compress", help="compression sweeps")
    comp_sub = p.add_subparsers(dest="compress_command", required=True)
    pc = comp_sub.add_parser("sweep", parents=[common])
    pc.add_argument("--p0", type=float, default=0.9)
    pc.add_argument("--epsilon", type=float, default=0.1)
    pc.add_argument("--ns", type=lambda s: [int(x) for x in s.split(",")], default=[4, 8, 12, 16, 20])
    pc.add_argument("--csv", action="store_true")
    pc.set_defaults(fn=cmd_compress_sweep)

    p = sub.add_parser("qec", help="error-correction demos")
    qec_sub = p.add_subparsers(dest="qec_command", required=True)
    pq = qec_sub.add_parser("demo", parents=[common])
    pq.add_argument("--code", choices=["bit_flip", "phase_flip", "shor9"], default="bit_flip")
    pq.add_argument("--p", type=float, default=0.1)
    pq.set_defaults(fn=cmd_qec_demo)

    p = sub.add_parser("capacity", help="capacity estimates")
    cap_sub = p.add_subparsers(dest="capacity_command", required=True)
    pcap = cap_sub.add_parser("estimate", parents=[common])
    pcap.add_argument("--channel", required=True)
    pcap.add_argument("--block", type=int, default=1)
    pcap.add_argument("--restarts", type=int, default=30)
    pcap.set_defaults(fn=cmd_capacity_estimate)

    p = sub.add_parser("protocols", help="protocol demos", parents=[common])
    p.add_argument("which", choices=["teleport", "superdense"])
    p.add_argument("--bits", default="00")
    p.set_defaults(fn=cmd_protocols)

    p = sub.add_parser("fuzz", help="randomized inequality suite", parents=[common])
    p.add_argument("which", choices=["inequalities"])
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(fn=cmd_fuzz)

    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    known_commands = {
        "entropy", "distance", "channel", "tomography", "entangle",
        "compress", "qec", "capacity", "protocols", "fuzz",
    }
    positional = [a for a in argv if not a.startswith("-")]
    if positional and positional[0] not in known_commands:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    if args.check:
        from .acceptance import run_all

        results = run_all(verbose=True)
        return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_CHECK_FAILED
    if not getattr(args, "fn", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    # seed propagation: subcommands read args.seed
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
