"""Entropic regions, with the minimum of H(A) + H(B) against the Maassen-Uffink value."""

from qubit_uncertainty.oracle import extremal_scan
from qubit_uncertainty.pseudo import build_set
from qubit_uncertainty.relations import maassen_uffink_bound

from _common import emit, pair_obs, parse_args

if __name__ == "__main__":
    args = parse_args(__doc__, "out/figure3")
    for ab in (0.0, 0.5):
        emit(args, f"entropy_ab{ab}", "region", "--obs", pair_obs(ab), "--measure", "entropy")
        S = build_set([[float(x) for x in v.split(",")] for v in pair_obs(ab).split(";")])
        low = extremal_scan(S, "entropy", "min_sum").value
        print(f"  a.b={ab}: min H(A)+H(B) = {low:.6f}, Maassen-Uffink bound = {maassen_uffink_bound(ab):.6f}")
