"""Standard-deviation regions with the Busch and Maassen-Uffink comparison curves."""

from _common import emit, pair_obs, parse_args

RADII = "1,0.97,0.9,0.8"

if __name__ == "__main__":
    args = parse_args(__doc__, "out/figure2")
    for ab in (0.0, 0.5):
        emit(args, f"stddev_ab{ab}", "region", "--obs", pair_obs(ab), "--measure", "stddev", "--radii", RADII)
