"""MISE of the two-time Fourier estimator as the number of channels grows.

Mixture 0.3 N(-3.5, 1) + 0.7 N(3.5, 1) jumps, N(0, 1) noise, t1 = 0.5,
t2 = 1, fixed cutoff.
"""

from _common import MIX35, NOISE, parser, save, seed_of

from decompound.fourier import FourierConfig
from decompound.risk import FourierSetting, sweep_sample_size


def main():
    p = parser(__doc__.splitlines()[0], 20)
    p.add_argument("--m", type=float, default=2.0)
    p.add_argument("--J", type=int, nargs="+", default=[2000, 5000, 10000, 20000, 50000])
    args = p.parse_args()
    seed = seed_of(args)
    setting = FourierSetting(MIX35, NOISE, args.J[0], FourierConfig(t1=0.5, t2=1.0, m=args.m))
    rep = sweep_sample_size(setting, args.J, args.replicates, seed, args.threads)
    for J, mise, se in rep.rows():
        print(f"J={J:>6d}  mise={mise:.5g}  se={se:.2g}")
    save(args, "mixed_J_sweep.csv", ["J", "mise", "stderr"], rep.rows(), seed)


if __name__ == "__main__":
    main()
