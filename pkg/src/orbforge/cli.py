"""``orbforge`` command line: model | symmetry | ansatz | dla | vqe | bench."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ansatz import KINDS, CircuitTemplate, Symmetry, build
from .bench import MODEL_NAMES, ExperimentConfig, ModelSpec, format_rows, orbit_report, relative_error, run_suite
from .dla import dla_dimension, lie_closure
from .optimizer import INIT_KINDS, ground_energy, multistart_vqe
from .pauli import PauliSum
from .symmetry import automorphisms, qubit_orbits


def _int_list(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(v) for v in text]
    out = []
    for part in str(text).split(","):
        if "-" in part.strip()[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part.strip():
            out.append(int(part))
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file whose keys mirror the long flags")
    p.add_argument("--model", choices=MODEL_NAMES, default="tfim1d")
    p.add_argument("--n", default="6", help="qubits / vertices; lists like 2-10 or 4,6 for bench")
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--cols", default=None, help="grid columns; lists allowed for bench")
    p.add_argument("--hx", type=float, default=1.0)
    p.add_argument("--j1", type=float, default=1.0)
    p.add_argument("--j2", type=float, default=0.5)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--graph", help="graph JSON file for maxcut")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orbforge", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("model", help="emit the model Hamiltonian as JSON")
    _common(p)

    p = sub.add_parser("symmetry", help="automorphism group and orbit summary")
    _common(p)
    p.add_argument("--hamiltonian", help="Hamiltonian JSON file instead of a named model")

    p = sub.add_parser("ansatz", help="emit a circuit template as JSON")
    _common(p)
    p.add_argument("--ansatz", choices=KINDS, default="orb")

    p = sub.add_parser("dla", help="dimension of the dynamical Lie algebra")
    _common(p)
    p.add_argument("--template", help="template JSON file (else built from the model flags)")
    p.add_argument("--hamiltonian", help="treat each term of this Hamiltonian JSON as a generator")
    p.add_argument("--ansatz", choices=KINDS, default="orb")
    p.add_argument("--dim-cap", type=int, default=None)

    p = sub.add_parser("vqe", help="multi-start VQE at a fixed depth")
    _common(p)
    p.add_argument("--ansatz", choices=KINDS, default="orb")
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--nrep", type=int, default=25)
    p.add_argument("--init", choices=INIT_KINDS, default="uniform")

    p = sub.add_parser("bench", help="critical depth suite, streamed to CSV")
    _common(p)
    p.add_argument("--ansatz", choices=KINDS, action="append", default=None)
    p.add_argument("--epsilon", type=float, default=1e-5)
    p.add_argument("--lmax", type=int, default=64)
    p.add_argument("--nrep", type=int, default=25)
    p.add_argument("--grad-samples", type=int, default=200)
    p.add_argument("--init", choices=INIT_KINDS, default="uniform")
    p.add_argument("--warm-start", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    return ap


def _parse(argv) -> argparse.Namespace:
    ap = _parser()
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        doc = json.loads(Path(args.config).read_text())
        sub = ap._subparsers._group_actions[0].choices[args.cmd]
        dests = {a.dest for a in sub._actions}
        doc = {k.replace("-", "_"): v for k, v in doc.items()}
        unknown = set(doc) - dests
        if unknown:
            ap.error(f"unknown config keys: {sorted(unknown)}")
        sub.set_defaults(**doc)
        args = ap.parse_args(argv)  # explicit flags override the file
    return args


def _spec(args, size=None) -> ModelSpec:
    graph = json.loads(Path(args.graph).read_text()) if args.graph else None
    grid = args.model in ("tfim2d", "j1j2")
    if size is None:
        size = _int_list(args.cols if grid else args.n)[0] if (args.cols or not grid) else 4
    rows = args.rows if args.rows is not None else (3 if args.model == "j1j2" else 2)
    return ModelSpec(args.model, size, rows, args.hx, args.j1, args.j2, args.degree, args.seed, graph)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _cmd_model(args) -> int:
    _emit(args, _spec(args).build().hamiltonian.to_json())
    return 0


def _cmd_symmetry(args) -> int:
    if args.hamiltonian:
        h = PauliSum.from_json(Path(args.hamiltonian).read_text())
        g = automorphisms(h)
        doc = {"n": h.n, "group_order": g.order, "generators": [list(p) for p in g.generators],
               "orbits": [sorted(o) for o in qubit_orbits(g).orbits]}
    else:
        model = _spec(args).build()
        sym = Symmetry.of(model)
        doc = orbit_report(model, sym)
        doc["generators"] = [list(p) for p in sym.group.generators]
        doc["orbits"] = [sorted(o) for o in sym.orbits.orbits]
        doc["edge_orbits"] = [sorted(list(e) for e in o) for o in sym.edge_orbits.edge_orbits]
    _emit(args, json.dumps(doc))
    return 0


def _cmd_ansatz(args) -> int:
    _emit(args, build(args.ansatz, _spec(args).build()).to_json())
    return 0


def _cmd_dla(args) -> int:
    if args.template:
        res = dla_dimension(CircuitTemplate.from_json(Path(args.template).read_text()), args.dim_cap)
    elif args.hamiltonian:
        h = PauliSum.from_json(Path(args.hamiltonian).read_text())
        res = lie_closure([PauliSum.from_string(t.string, t.coeff) for t in h.terms], args.dim_cap)
    else:
        res = dla_dimension(build(args.ansatz, _spec(args).build()), args.dim_cap)
    _emit(args, json.dumps({"dim": res.dim, "truncated": res.truncated}))
    return 0


def _cmd_vqe(args) -> int:
    model = _spec(args).build()
    template = build(args.ansatz, model)
    e_gs = ground_energy(model.hamiltonian)
    r = multistart_vqe(template, args.layers, model.hamiltonian, n_rep=args.nrep, seed=args.seed, init=args.init)
    doc = {
        "model": model.name, "ansatz": args.ansatz, "layers": args.layers, "n_params": template.n_params(args.layers),
        "e_gs": e_gs, "e_best": r.energy, "e_median": r.median_energy,
        "rel_err_best": relative_error(r.energy, e_gs), "rel_err_median": relative_error(r.median_energy, e_gs),
        "restart_energies": r.restart_energies, "theta_best": r.theta.tolist(),
    }
    _emit(args, json.dumps(doc))
    return 0


def _cmd_bench(args) -> int:
    grid = args.model in ("tfim2d", "j1j2")
    sizes = _int_list(args.cols if grid and args.cols else args.n)
    cfg = ExperimentConfig(
        model=_spec(args, sizes[0]), sizes=sizes, ansatz=args.ansatz or list(KINDS), epsilon=args.epsilon,
        l_max=args.lmax, n_rep=args.nrep, grad_samples=args.grad_samples, seed=args.seed, out=args.out,
        init=args.init, warm_start=args.warm_start, workers=args.workers,
    )
    rows = run_suite(cfg, log=lambda s: print(s, file=sys.stderr, flush=True))
    print(format_rows(rows))
    return 0


COMMANDS = {"model": _cmd_model, "symmetry": _cmd_symmetry, "ansatz": _cmd_ansatz, "dla": _cmd_dla,
            "vqe": _cmd_vqe, "bench": _cmd_bench}


def main(argv=None) -> int:
    args = _parse(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (ValueError, OSError) as exc:
        print(f"orbforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
