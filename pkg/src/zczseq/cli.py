"""Command-line front end: construct, verify, spectrum, simulate.

Exit codes: 0 success, 1 usage or I/O error, 2 certificate failure.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, construction, correlation, qscdma
from .gbf import parse_gbf_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERT_FAIL = 2


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; 2 is reserved for
    # certificate failures here, so route usage problems through code 1.
    def error(self, message):
        raise CliUsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(","))


def _pair_list(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        a, _, b = tok.partition("-")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zczseq", description=__doc__)
    parser.add_argument("--version", action="version", version=f"zczseq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build a family and write it to disk")
    con.add_argument("--example1", action="store_true", help="use the bundled worked example")
    con.add_argument("-q", type=int, help="even modulus")
    con.add_argument("-m", type=int, help="base variable count")
    con.add_argument("-k", type=int, help="coupling order")
    con.add_argument("-s", type=int, help="family-splitting order (number of sets = 2^s)")
    con.add_argument("--J", type=_int_list, default=None, help="comma list, ordered removable vertices")
    con.add_argument("--pi", type=_int_list, default=None, help="comma list, path order permutation")
    con.add_argument("--f", dest="f_path", default=None, help="path to a base function in GBF text format")
    con.add_argument("--h-c", type=_int_list, default=None, help="comma bits c_1..c_{k+1}")
    con.add_argument("--h-d", type=_pair_list, default=None, help="cross-term pairs like 1-2,2-3")
    con.add_argument("--h-e", type=_int_list, default=None, help="comma bits e_0..e_{k+1}")
    con.add_argument("--h-ep", type=int, default=None, help="constant bit of the seed function")
    con.add_argument("--no-certify", action="store_true", help="skip certificates (just build and write)")
    con.add_argument("-o", "--out", required=True, help="output directory")
    con.set_defaults(func=cmd_construct)

    ver = sub.add_parser("verify", help="re-certify a family directory")
    ver.add_argument("directory")
    ver.add_argument("--zcz", type=int, default=None, help="claimed per-set zone width (default: header)")
    ver.add_argument("--zccz", type=int, default=None, help="claimed inter-set zone width (default: header)")
    ver.add_argument("--deep", action="store_true",
                     help="also run the seed-cancellation and chunk-decomposition checks")
    ver.add_argument("--report", default=None, help="certificate JSON path (default: DIR/certificates.json)")
    ver.set_defaults(func=cmd_verify)

    spec = sub.add_parser("spectrum", help="dump the all-pairs periodic correlation table as CSV")
    spec.add_argument("directory")
    spec.add_argument("-o", "--out", required=True, help="CSV output path")
    spec.add_argument("--max-cells", type=int, default=correlation.DEFAULT_SPECTRUM_CELL_CAP)
    spec.set_defaults(func=cmd_spectrum)

    sim = sub.add_parser("simulate", help="run the multi-cluster uplink Monte-Carlo")
    sim.add_argument("config", help="JSON simulation config")
    sim.add_argument("-o", "--out", required=True, help="output directory")
    sim.add_argument("--workers", type=int, default=None,
                     help=f"process count (default: ${qscdma.WORKERS_ENV_VAR} or 1)")
    sim.set_defaults(func=cmd_simulate)
    return parser


def _params_from_args(args) -> construction.ConstructionParams:
    if args.example1:
        return construction.example1_params()
    if None in (args.q, args.m, args.k, args.s):
        raise CliUsageError("construct needs --example1 or all of -q, -m, -k, -s")
    f = None
    if args.f_path:
        f = parse_gbf_text(Path(args.f_path).read_text())
    h = None
    if any(v is not None for v in (args.h_c, args.h_d, args.h_e, args.h_ep)):
        if args.h_c is None:
            raise CliUsageError("--h-d/--h-e/--h-ep need --h-c as well")
        h = construction.HCoeffs(
            c=args.h_c,
            d_pairs=args.h_d or (),
            e=args.h_e or (),
            e_prime=args.h_ep or 0,
        )
    return construction.default_params(
        args.q, args.m, args.k, args.s, J=args.J, pi=args.pi, f=f, h=h
    )


def _certify(family: construction.MultipleZczFamily, deep: bool = False) -> dict:
    """Run every certificate for a family; returns a JSON-ready summary."""
    report: dict = {"sets": [], "inter": [], "deep": None}
    ok = True
    for t1, st in enumerate(family.sets):
        cert = correlation.verify_zcz(st.sequences, family.Z)
        ok &= cert.passed
        report["sets"].append(cert.to_json_dict())
    for a in range(len(family.sets)):
        for b in range(a + 1, len(family.sets)):
            inter = correlation.verify_inter_zccz(
                family.sets[a].sequences, family.sets[b].sequences, family.Zc
            )
            ok &= inter.passed
            entry = inter.to_json_dict()
            entry["pair"] = [a, b]
            report["inter"].append(entry)
    union = construction.union_family(family)
    union_cert = correlation.verify_zcz(union.sequences, union.Z)
    ok &= union_cert.passed
    report["union"] = union_cert.to_json_dict()
    if deep:
        report["deep"] = _deep_checks(family)
        ok &= report["deep"]["pass"]
    report["pass"] = bool(ok)
    return report


def _deep_checks(family: construction.MultipleZczFamily) -> dict:
    params = family.params
    if params is None:
        raise CliUsageError("--deep needs construction parameters in the manifest")
    cancel = construction.check_seed_cancellation(construction.seed_polynomial(params.h))
    codes = construction.build_ccc_family(params)
    n_sets = len(family.sets)
    K = family.sets[0].K
    checked = 0
    mismatches = []
    for t1 in range(n_sets):
        for t1b in range(n_sets):
            for i in range(K):
                for j in range(K):
                    for tau in range(0, (1 << params.m) + 1):
                        rep = construction.check_chunk_decomposition(
                            family, t1, t1b, i, j, tau, codes=codes
                        )
                        checked += 1
                        if not rep.passed:
                            mismatches.append([t1, t1b, i, j, tau])
    return {
        "pass": cancel.passed and not mismatches,
        "seed_cancellation": {"pass": cancel.passed, "failures": list(cancel.failures)},
        "chunk_decomposition": {"pass": not mismatches, "checked": checked,
                                "mismatches": mismatches[:16]},
    }


def _rho_str(rho: Fraction) -> str:
    return str(rho.numerator) if rho.denominator == 1 else f"{rho.numerator}/{rho.denominator}"


def _print_family_summary(family, out=None):
    out = out if out is not None else sys.stdout
    K = family.sets[0].K
    print(
        f"sets: {len(family.sets)}  sequences/set: {K}  length: {family.L}",
        file=out,
    )
    print(f"zone width Z: {family.Z}  inter-set zone Zc: {family.Zc}", file=out)
    binary = family.q == 2
    rho, cls = correlation.performance_parameter(K, family.Z, family.L, binary=binary)
    print(
        f"per-set rho ({'binary' if binary else 'general'}): {_rho_str(rho)} ({cls})",
        file=out,
    )
    union_k = sum(st.K for st in family.sets)
    urho, ucls = correlation.performance_parameter(union_k, family.Zc, family.L, binary=binary)
    print(
        f"union: ({union_k},{family.Zc},{family.L})  rho: {_rho_str(urho)} ({ucls})",
        file=out,
    )


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def cmd_construct(args) -> int:
    params = _params_from_args(args)
    family = construction.build_multiple_zcz(params)
    certificates = None if args.no_certify else _certify(family)
    construction.export_family(
        family,
        args.out,
        certificates=certificates,
        command="construct",
        extra={"created_utc": _utc_now(), "argv": sys.argv[1:]},
    )
    _print_family_summary(family)
    if certificates is not None:
        print(f"certificates: {'PASS' if certificates['pass'] else 'FAIL'}")
    print(f"wrote: {args.out}")
    if certificates is not None and not certificates["pass"]:
        return EXIT_CERT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    loaded = construction.load_family(args.directory)
    Z = args.zcz if args.zcz is not None else loaded.Z
    Zc = args.zccz if args.zccz is not None else loaded.Zc
    family = construction.MultipleZczFamily(
        params=loaded.params,
        sets=tuple(
            construction.ZczSequenceSet(sequences=st, K=len(st), Z=Z, L=loaded.L, label=t1)
            for t1, st in enumerate(loaded.sets)
        ),
        Z=Z,
        Zc=Zc,
    )
    report = _certify(family, deep=args.deep)
    report["claimed"] = {"Z": Z, "Zc": Zc}
    report["verified_utc"] = _utc_now()

    for t1, cert in enumerate(report["sets"]):
        par = cert["parameters"]
        rho = Fraction(*cert["rho"])
        print(
            f"set {t1}: ({par['K']},{par['Z']},{par['L']}) "
            f"{'PASS' if cert['pass'] else 'FAIL'} rho={_rho_str(rho)} {cert['classification']}"
        )
        if not cert["pass"]:
            w = cert["witnesses"][0]
            print(f"  witness: pair ({w['i']},{w['j']}) shift {w['shift']} value {w['re']}+{w['im']}j")
    for entry in report["inter"]:
        a, b = entry["pair"]
        print(f"inter {a}x{b} @ Zc={entry['parameters']['Zc']}: {'PASS' if entry['pass'] else 'FAIL'}")
        if not entry["pass"]:
            w = entry["witnesses"][0]
            print(f"  witness: pair ({w['i']},{w['j']}) shift {w['shift']} value {w['re']}+{w['im']}j")
    u = report["union"]
    upar = u["parameters"]
    print(
        f"union: ({upar['K']},{upar['Z']},{upar['L']}) "
        f"{'PASS' if u['pass'] else 'FAIL'} rho={_rho_str(Fraction(*u['rho']))} {u['classification']}"
    )
    if args.deep:
        deep = report["deep"]
        print(
            f"deep: seed-cancellation {'PASS' if deep['seed_cancellation']['pass'] else 'FAIL'}; "
            f"chunk-decomposition {'PASS' if deep['chunk_decomposition']['pass'] else 'FAIL'} "
            f"({deep['chunk_decomposition']['checked']} checks)"
        )
    print(f"overall: {'PASS' if report['pass'] else 'FAIL'}")

    report_path = Path(args.report) if args.report else Path(args.directory) / "certificates.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["pass"] else EXIT_CERT_FAIL


def cmd_spectrum(args) -> int:
    loaded = construction.load_family(args.directory)
    seqs = [z for st in loaded.sets for z in st]
    table = correlation.correlation_spectrum(seqs, max_cells=args.max_cells)
    table.write_csv(args.out)
    print(f"wrote: {args.out} ({table.K * table.K * table.L} rows)")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config_path = Path(args.config)
    raw = json.loads(config_path.read_text())
    if "family_dir" in raw:
        family = construction.load_family(raw.pop("family_dir")).as_family()
    elif "construction" in raw:
        con = raw.pop("construction")
        params = construction.default_params(
            con["q"], con["m"], con["k"], con["s"],
            J=con.get("J"), pi=con.get("pi"),
        )
        family = construction.build_multiple_zcz(params)
    else:
        raise CliUsageError("simulation config needs 'family_dir' or 'construction'")
    config = qscdma.SimulationConfig.from_json_dict(raw)
    result = qscdma.simulate_ber(family, config, workers=args.workers)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "ber.csv"
    lines = ["snr_db,user_id,ber,ci_halfwidth,bits"]
    for curve in result.curves:
        uid = curve.cluster * config.users_per_cluster + curve.user
        for pt in curve.points:
            lines.append(
                f"{pt.snr_db!r},{uid},{pt.ber!r},{pt.ci_halfwidth!r},{pt.bits}"
            )
    csv_path.write_text("\n".join(lines) + "\n")

    summary = {
        "config": json.loads(config_path.read_text()),
        "delays": result.delays.tolist(),
        "ebn0_db": list(result.ebn0_db),
        "curves": [
            {
                "cluster": c.cluster,
                "user": c.user,
                "points": [
                    {"snr_db": None if math.isinf(p.snr_db) else p.snr_db,
                     "errors": p.errors, "bits": p.bits,
                     "ber": p.ber, "ci_halfwidth": p.ci_halfwidth}
                    for p in c.points
                ],
            }
            for c in result.curves
        ],
    }
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    manifest = {
        "tool": "zczseq",
        "version": __version__,
        "command": "simulate",
        "created_utc": _utc_now(),
        "inputs": {str(config_path): _sha256_file(config_path)},
        "outputs": {
            csv_path.name: _sha256_file(csv_path),
            summary_path.name: _sha256_file(summary_path),
        },
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote: {csv_path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
