"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 invalid input, 3 gate verdict
HypothesisFailed.  All output is JSON with exact numbers.
"""
import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import gcd

import jsonschema

from . import metacyclic as mc
from .cyclotomic import mult_order
from .errors import InconsistentGroup, RootnumError, SchemaError
from .lattice import triangular_basis, unit_pivot_change_of_basis
from .root_number import LocalPlace, TauData, theorem_gate, w_global
from .uniformization import SIGMA_TOTAL, UniformizationInput, assemble_sigma, weight_audit
from .wd_algebra import (
    GrothendieckLedger,
    WeilIrred,
    WeilRep,
    grothendieck_decompose,
    twist_omega,
)

FORMAT_VERSION = "1"
EXIT_OK, EXIT_DOMAIN, EXIT_INPUT, EXIT_FAILED = 0, 1, 2, 3


def load_schema():
    return json.loads(resources.files("rootnum").joinpath("place_schema.json").read_text())


# ---------------------------------------------------------------------------
# exact values in JSON


def rat_out(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rat_in(v):
    return Fraction(v)


def _path(parts):
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in parts)


# ---------------------------------------------------------------------------
# parsing


@dataclass
class PlaceFile:
    doc: dict
    genus: int
    tau: TauData
    places: list


def _group(obj, path):
    n, k = obj["n"], obj["k"]
    if gcd(k, n) != 1:
        raise InconsistentGroup(f"{_path(path)}: gcd(k={k}, n={n}) != 1")
    return mc.group_new(n, k)


def _desc(G, obj, path):
    d, e, x, w = obj["d"], obj["e"], obj["x"], obj["w"]
    errors = []
    if G.n % d:
        errors.append((_path(path + ["d"]), f"d={d} does not divide n={G.n}"))
    else:
        order = mult_order(G.k, d)
        if x != order:
            errors.append((_path(path + ["x"]), f"x={x} but ord(k mod {d}) = {order}"))
        elif mc.exponent_order(G, e) != d:
            errors.append((_path(path + ["e"]), f"zeta_{G.n}^{e} does not have order {d}"))
        elif w >= 2 * G.s // x:
            errors.append((_path(path + ["w"]), f"w={w} must be < 2s/x = {2 * G.s // x}"))
    if errors:
        raise SchemaError(errors)
    return mc.descriptor(G, e, w, d, x)


def _tau(obj, path, flags_allowed=True):
    G = _group(obj, path)
    terms = [
        (_desc(G, c, path + ["constituents", i]), c.get("multiplicity", 1))
        for i, c in enumerate(obj["constituents"])
    ]
    rep = mc.VirtualChar(G, terms)
    minus = obj.get("artin_minus_one")
    artin = G.element(*minus) if minus is not None else None
    try:
        return TauData(G, rep, artin, obj.get("flags") if flags_allowed else None)
    except ValueError as exc:
        raise SchemaError([(_path(path), str(exc))]) from None


def _weil(G, items, path):
    out = []
    for i, s in enumerate(items or []):
        part = s["part"]
        fp = part if isinstance(part, str) else _desc(G, part, path + [i, "part"])
        weight = s.get("weight")
        irred = WeilIrred(fp, rat_in(s.get("omega_t", 0)), None if weight is None else rat_in(weight))
        out.append((irred, s.get("multiplicity", 1)))
    return WeilRep(out)


def _ledger(G, obj, path):
    fields = {name: _weil(G, obj.get(name), path + [name]) for name in ("mu", "mu0", "mu0p")}
    # positional: hat_list[i] is the companion of mu_list[i]
    lists = {
        name: [
            i
            for j, s in enumerate(obj.get(name) or [])
            for i, m in _weil(G, [s], path + [name, j]).items()
            for _ in range(m)
        ]
        for name in ("mu_list", "hat_list")
    }
    return GrothendieckLedger(G, **fields, **lists, case_tag="given")


def parse_place_file(data) -> PlaceFile:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError([("$", f"invalid JSON: {exc}")]) from None
    else:
        doc = data
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        raise SchemaError([(_path(list(e.absolute_path)), e.message) for e in errors])

    g = doc["genus"]
    tau = _tau(doc["tau"], ["tau"])
    places = []
    for i, pd in enumerate(doc["places"]):
        path = ["places", i]
        loc = _tau(pd["tau"], path + ["tau"], False) if "tau" in pd else tau
        G = loc.group
        kw = dict(kind=pd["kind"], g=g, tau=loc, name=pd.get("name", ""))
        if pd["kind"] == "finite":
            chi = _weil(G, pd.get("chi"), path + ["chi"])
            kappa = _weil(G, pd.get("kappa"), path + ["kappa"])
            p = pd["p"]
            u = UniformizationInput(kappa, chi, pd.get("r", chi.dim), g, pd.get("q", p))
            ledger = pd.get("ledger", "auto")
            kw.update(
                p=p,
                q=pd.get("q", p),
                uniformization=u,
                ledger=None if ledger == "auto" else _ledger(G, ledger, path + ["ledger"]),
                alpha_list=pd.get("alpha_list"),
                abelian=pd.get("abelian"),
            )
        try:
            places.append(LocalPlace(**kw))
        except ValueError as exc:
            raise SchemaError([(_path(path), str(exc))]) from None
    return PlaceFile(doc, g, tau, places)


# ---------------------------------------------------------------------------
# emitting


def desc_out(rep):
    return {"d": rep.d, "e": rep.e, "x": rep.x, "w": rep.w}


def _part_out(fp):
    return fp if isinstance(fp, str) else desc_out(fp)


def weil_out(rep):
    out = []
    for irred, m in rep.items():
        item = {"part": _part_out(irred.finite_part), "omega_t": rat_out(irred.omega_t), "multiplicity": m}
        if not irred.is_pure_twist():
            item["weight"] = rat_out(irred.weight)
        out.append(item)
    return out


def _tau_out(tau, with_flags=True):
    G = tau.group
    out = {
        "n": G.n,
        "k": G.k,
        "constituents": [dict(desc_out(r), multiplicity=m) for r, m in tau.rep.terms.items()],
    }
    if tau.artin_minus_one is not None:
        out["artin_minus_one"] = [tau.artin_minus_one.t, tau.artin_minus_one.v]
    if with_flags and tau.global_flags:
        out["flags"] = dict(tau.global_flags)
    return out


def _weil_list(items):
    return [weil_out(WeilRep([i]))[0] for i in items]


def ledger_out(ledger):
    return {
        "mu": weil_out(ledger.mu),
        "mu0": weil_out(ledger.mu0),
        "mu0p": weil_out(ledger.mu0p),
        "mu_list": _weil_list(ledger.mu_list),
        "hat_list": _weil_list(ledger.hat_list),
    }


def emit_place_file(pf: PlaceFile) -> str:
    """Canonical JSON text; parse followed by emit is idempotent."""
    places = []
    for place in pf.places:
        item = {"kind": place.kind, "name": place.name}
        if place.tau is not pf.tau:
            item["tau"] = _tau_out(place.tau, False)
        if place.kind == "finite":
            u = place.uniformization
            item.update(p=place.p, q=place.q, r=u.r, chi=weil_out(u.chi), kappa=weil_out(u.kappa))
            item["ledger"] = "auto" if place.ledger is None else ledger_out(place.ledger)
            if place.alpha_list is not None:
                item["alpha_list"] = list(place.alpha_list)
            if place.abelian is not None:
                item["abelian"] = place.abelian
        places.append(item)
    doc = {"version": FORMAT_VERSION, "genus": pf.genus, "tau": _tau_out(pf.tau), "places": places}
    return dumps(doc)


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def trace_out(trace):
    return {
        "place": trace.place,
        "branch": trace.branch,
        "factors": [{"name": n, "exponent": e, "value": v} for n, e, v in trace.factors],
        "product": trace.product,
        "notes": list(trace.notes),
    }


def trace_document(traces, verdict=None):
    product = 1
    for t in traces:
        product *= t.check().product
    doc = {"version": FORMAT_VERSION, "places": [trace_out(t) for t in traces], "product": product}
    if verdict is not None:
        doc["verdict"] = {
            "status": verdict.status,
            "value": verdict.value,
            "failed": verdict.failed,
            "message": verdict.message,
            "notes": list(verdict.notes),
        }
    recomputed = 1
    for p in doc["places"]:
        recomputed *= p["product"]
    assert recomputed == doc["product"]
    return doc


# ---------------------------------------------------------------------------
# subcommands


def _group_args(args):
    if args.n is None or args.k is None:
        raise SchemaError([("--n/--k", "both --n and --k are required")])
    if gcd(args.k, args.n) != 1:
        raise InconsistentGroup(f"gcd(k={args.k}, n={args.n}) != 1")
    return mc.group_new(args.n, args.k)


def _selected(G, args):
    if args.all or args.e is None:
        return mc.irreducibles(G)
    return [mc.descriptor(G, args.e, args.w or 0)]


def _form_name(ind):
    return {1: "orthogonal", -1: "symplectic", 0: "unitary"}[ind]


def cmd_irreps(args):
    G = _group_args(args)
    reps = mc.irreducibles(G)
    return {
        "group": {"n": G.n, "k": G.k, "order": G.order},
        "count": len(reps),
        "irreps": [dict(desc_out(r), dim=r.dim, conductor=r.conductor) for r in reps],
    }


def cmd_indicator(args):
    G = _group_args(args)
    return {
        "group": {"n": G.n, "k": G.k},
        "irreps": [dict(desc_out(r), indicator=mc.fs_indicator(G, r)) for r in _selected(G, args)],
    }


def cmd_classify(args):
    G = _group_args(args)
    rows = []
    for r in _selected(G, args):
        ind = mc.fs_indicator(G, r)
        row = dict(desc_out(r), indicator=ind, form=_form_name(ind))
        row["criterion"] = mc.is_symplectic_by_criterion(G, r)
        if row["criterion"]:
            row["hat"] = desc_out(mc.hat_rep(G, r))
            row["hat_pairing"] = mc.inner_product(G, r, mc.hat_rep(G, r))
        rows.append(row)
    return {"group": {"n": G.n, "k": G.k}, "irreps": rows}


def _vc_out(vc):
    return [dict(desc_out(r), multiplicity=m) for r, m in vc.terms.items()]


def _poly_out(vc):
    poly = mc.char_poly_at_b(vc)
    return None if poly is None else list(poly.coeffs)


def cmd_theta(args):
    G = _group_args(args)
    from sympy import divisors

    ds = [args.d] if args.d is not None else divisors(G.n)
    out = []
    for d in ds:
        theta, pi = mc.theta_rep(G, d), mc.pi_rep(G, d)
        out.append(
            {
                "d": d,
                "theta": _vc_out(theta),
                "theta_dim": theta.dim,
                "theta_charpoly_b": _poly_out(theta),
                "pi": _vc_out(pi),
                "pi_dim": pi.dim,
            }
        )
    return {"group": {"n": G.n, "k": G.k}, "theta": out}


def _read_input(args):
    name = args.input or args.file
    if name is None:
        raise SchemaError([("--input", "a place file is required")])
    try:
        with open(name, "rb") as fh:
            return parse_place_file(fh.read())
    except OSError as exc:
        raise SchemaError([("--input", str(exc))]) from None


def _finite(pf):
    return [p for p in pf.places if p.kind == "finite"]


def cmd_grothendieck(args):
    pf = _read_input(args)
    out = []
    for place in _finite(pf):
        lam = twist_omega(place.uniformization.kappa, Fraction(1, 2))
        ledger = grothendieck_decompose(place.tau.group, lam)
        item = {"place": place.name, "lambda": weil_out(lam)}
        item.update(ledger_out(ledger))
        item.update(
            a=ledger.a,
            case=ledger.case_tag,
            center=rat_out(ledger.center),
            blocks=[{"d": b.d, "case": b.case, "v": b.v} for b in ledger.blocks],
        )
        out.append(item)
    return {"places": out}


def cmd_assemble(args):
    pf = _read_input(args)
    out = []
    for place in _finite(pf):
        sigma = assemble_sigma(place.uniformization)
        audit = weight_audit(sigma, SIGMA_TOTAL)
        out.append(
            {
                "place": place.name,
                "blocks": [
                    {"irred": weil_out(WeilRep([irred]))[0], "sp": n, "multiplicity": m}
                    for (irred, n), m in sigma.items()
                ],
                "dim": sigma.dim,
                "nilpotent_rank": sigma.nilpotent_rank,
                "weights": {rat_out(w): c for w, c in sorted(audit.weight_histogram.items())},
                "violations": audit.violations,
            }
        )
    return {"places": out}


def _parse_rows(text):
    try:
        return [[int(x) for x in row.split(",")] for row in text.split(";") if row.strip()]
    except ValueError:
        raise SchemaError([("--rows", f"cannot parse {text!r}")]) from None


def _row_text(row):
    return ",".join(map(str, row))


def cmd_lattice(args):
    if args.rows is None:
        raise SchemaError([("--rows", "required")])
    rows = _parse_rows(args.rows)
    if args.unit:
        D, pb = unit_pivot_change_of_basis(rows)
        return {
            "D": [_row_text(r) for r in D],
            "basis": [_row_text(r) for r in pb.basis],
            "pivots": _row_text(pb.pivots),
        }
    pb = triangular_basis(rows)
    return {"basis": [_row_text(r) for r in pb.basis], "pivots": _row_text(pb.pivots)}


def _write_trace(args, doc):
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))


def cmd_root_number(args):
    pf = _read_input(args)
    sign, traces = w_global(pf.places)
    doc = trace_document(traces)
    assert doc["product"] == sign
    _write_trace(args, doc)
    return doc


def cmd_gate(args):
    pf = _read_input(args)
    verdict = theorem_gate(pf.places, pf.tau)
    doc = trace_document(verdict.traces, verdict)
    _write_trace(args, doc)
    return doc, EXIT_OK if verdict.proven else EXIT_FAILED


COMMANDS = {
    "irreps": cmd_irreps,
    "indicator": cmd_indicator,
    "classify": cmd_classify,
    "theta": cmd_theta,
    "grothendieck": cmd_grothendieck,
    "lattice": cmd_lattice,
    "assemble": cmd_assemble,
    "root-number": cmd_root_number,
    "gate": cmd_gate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="rootnum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name in ("irreps", "indicator", "classify", "theta"):
            p.add_argument("--n", type=int)
            p.add_argument("--k", type=int)
        if name in ("indicator", "classify"):
            p.add_argument("--all", action="store_true")
            p.add_argument("--e", type=int)
            p.add_argument("--w", type=int)
        if name == "theta":
            p.add_argument("--d", type=int)
        if name == "lattice":
            p.add_argument("--rows")
            p.add_argument("--unit", action="store_true", help="also report the unimodular change of basis")
        if name in ("grothendieck", "assemble", "root-number", "gate"):
            p.add_argument("file", nargs="?")
            p.add_argument("--input")
        if name in ("root-number", "gate"):
            p.add_argument("--trace")
    return parser


def run_subcommand(name, argv=(), out=None):
    """Run one subcommand; returns (exit code, output text)."""
    args = build_parser().parse_args([name, *argv])
    try:
        result = COMMANDS[name](args)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
    except (SchemaError, InconsistentGroup) as exc:
        errors = getattr(exc, "errors", [("$", str(exc))])
        result = {"error": type(exc).__name__, "errors": [{"path": p, "message": m} for p, m in errors]}
        code = EXIT_INPUT
    except RootnumError as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_DOMAIN
    except ValueError as exc:
        result, code = {"error": "ValueError", "message": str(exc)}, EXIT_DOMAIN
    text = dumps(result)
    if out is not None:
        out.write(text)
    return code, text


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] not in COMMANDS:
        build_parser().parse_args(argv)
        return EXIT_INPUT
    code, _ = run_subcommand(argv[0], argv[1:], sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
