"""TFIM on 2 x n_c grids: critical depths and gradient variance at each ansatz's own depth."""
import argparse
import sys

from orbforge.bench import ExperimentConfig, ModelSpec, format_rows, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cols", default="2,3,4,5")
    ap.add_argument("--hx", type=float, default=1.0)
    ap.add_argument("--epsilon", type=float, default=1e-3)
    ap.add_argument("--lmax", type=int, default=64)
    ap.add_argument("--nrep", type=int, default=25)
    ap.add_argument("--grad-samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="tfim2d_gradients.csv")
    args = ap.parse_args()
    cfg = ExperimentConfig(model=ModelSpec("tfim2d", rows=2, h_x=args.hx), sizes=[int(c) for c in args.cols.split(",")],
                           epsilon=args.epsilon, l_max=args.lmax, n_rep=args.nrep,
                           grad_samples=args.grad_samples, seed=args.seed, out=args.out)
    rows = run_suite(cfg, log=lambda s: print(s, file=sys.stderr, flush=True))
    print(format_rows(rows))


if __name__ == "__main__":
    main()
