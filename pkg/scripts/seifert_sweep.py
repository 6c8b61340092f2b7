"""Sweep Seifert fibered homology spheres and report which have no c_1 != 0 plumbing filling."""

import argparse
from collections import Counter

from su2cert.seifert import homology_sphere_sweep, seifert_filling, sfs_lspace_classify, sweep_exceptions


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-p", type=int, default=9)
    ap.add_argument("--fibres", type=int, nargs="+", default=[3, 4])
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)

    spaces = homology_sphere_sweep(args.max_p, tuple(args.fibres))
    by_k = Counter(Y.k for Y in spaces)
    print(f"{len(spaces)} spaces up to orientation: " + ", ".join(f"{n} with {k} fibres" for k, n in sorted(by_k.items())))
    exc = sweep_exceptions(spaces)
    for Y in exc:
        patched = seifert_filling(Y).c1_nonzero
        print(f"exception: {Y}  L-space: {'yes' if sfs_lspace_classify(Y) else 'no'}  "
              f"override gives c_1 != 0: {'yes' if patched else 'no'}")
    if args.verbose:
        for Y in spaces:
            print(f"  {Y}")


if __name__ == "__main__":
    main()
