"""Dynamical Lie algebra dimensions of the three ansatz families on the open TFIM chain."""
import argparse

from orbforge.ansatz import Symmetry, build
from orbforge.dla import dla_dimension
from orbforge.models import tfim_chain_model


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="3,4,5,6,7")
    args = ap.parse_args()
    print(f"{'n':>3} {'hva':>6} {'orb':>6} {'free':>6} {'n^2':>6}")
    for n in (int(s) for s in args.sizes.split(",")):
        m = tfim_chain_model(n)
        sym = Symmetry.of(m)
        dims = [dla_dimension(build(k, m, sym)).dim for k in ("hva", "orb", "free")]
        print(f"{n:>3} {dims[0]:>6} {dims[1]:>6} {dims[2]:>6} {n * n:>6}")


if __name__ == "__main__":
    main()
