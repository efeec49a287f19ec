"""Expectation-value regions of two Pauli observables: ellipses at several purities."""

from _common import emit, pair_obs, parse_args

RADII = "1,0.8,0.6,0.4"

if __name__ == "__main__":
    args = parse_args(__doc__, "out/figure1")
    for ab in (0.0, 0.5):
        emit(args, f"expectation_ab{ab}", "region", "--obs", pair_obs(ab), "--measure", "expectation",
             "--radii", RADII)
