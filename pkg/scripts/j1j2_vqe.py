"""J1-J2 model on a 3 x 4 grid: median relative error versus depth for each ansatz."""
import argparse
import csv

from orbforge.ansatz import Symmetry, build
from orbforge.bench import critical_depth
from orbforge.models import j1j2_model
from orbforge.optimizer import ground_energy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=3)
    ap.add_argument("--cols", type=int, default=4)
    ap.add_argument("--j2", type=float, default=0.5)
    ap.add_argument("--epsilon", type=float, default=5e-3)
    ap.add_argument("--lmax", type=int, default=32)
    ap.add_argument("--nrep", type=int, default=25)
    ap.add_argument("--init", default="small", choices=["small", "uniform"])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="j1j2_vqe.csv")
    args = ap.parse_args()
    m = j1j2_model(args.rows, args.cols, 1.0, args.j2)
    sym = Symmetry.of(m)
    e_gs = ground_energy(m.hamiltonian)
    print(f"E_GS = {e_gs:.10f}")
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ansatz", "n_l", "L", "median_rel_err", "best_rel_err"])
        for kind in ("orb", "free", "hva"):
            t = build(kind, m, sym)
            res = critical_depth(t, m.hamiltonian, args.epsilon, args.lmax, args.nrep, seed=args.seed, e_gs=e_gs,
                                 init=args.init, log=lambda s, k=kind: print(k, s, flush=True))
            for L in sorted(res.errors):
                w.writerow([kind, t.n_l, L, f"{res.errors[L]:.6e}", f"{res.best_errors[L]:.6e}"])
            print(f"{kind}: n_l={t.n_l} L_c={res.L_c}")


if __name__ == "__main__":
    main()
