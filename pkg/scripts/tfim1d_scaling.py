"""Critical depth, parameter count and gradient variance for the open TFIM chain."""
import argparse
import sys

from orbforge.bench import ExperimentConfig, ModelSpec, format_rows, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="2,3,4,5,6,7,8,9,10")
    ap.add_argument("--epsilon", type=float, default=1e-5)
    ap.add_argument("--lmax", type=int, default=64)
    ap.add_argument("--nrep", type=int, default=25)
    ap.add_argument("--grad-samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="tfim1d_scaling.csv")
    args = ap.parse_args()
    cfg = ExperimentConfig(model=ModelSpec("tfim1d"), sizes=[int(s) for s in args.sizes.split(",")],
                           epsilon=args.epsilon, l_max=args.lmax, n_rep=args.nrep,
                           grad_samples=args.grad_samples, seed=args.seed, out=args.out)
    rows = run_suite(cfg, log=lambda s: print(s, file=sys.stderr, flush=True))
    print(format_rows(rows))


if __name__ == "__main__":
    main()
