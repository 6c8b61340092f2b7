"""Random families of Donaldson series models; checks the orthogonality matrix two independent ways."""

import argparse
import random
import time

from su2cert.operators import orthogonality_matrix, random_family
from su2cert.series import orthogonality_matrix_series


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--max-g", type=int, default=5)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    failures = 0
    t0 = time.perf_counter()
    for i in range(args.count):
        n, g = rng.randint(1, args.max_n), rng.randint(2, args.max_g)
        fam = random_family(rng, n, g)
        A = orthogonality_matrix(fam)
        D = [[fam[r].bottom.alpha if r == c else 0 for c in range(n)] for r in range(n)]
        ok = A == D and A == orthogonality_matrix_series(fam)
        failures += not ok
        if not ok:
            print(f"family {i} (n={n}, g={g}) FAILED: {A}")
    print(f"{args.count} families, {failures} failures, {time.perf_counter() - t0:.2f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
