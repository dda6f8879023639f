"""MISE of the Fourier estimator against the second observation time.

Mixture 0.3 N(-2, 1) + 0.7 N(2, 1) jumps, N(0, 1) noise, t1 = 0.2, m = 2.
"""

from _common import MIX2, NOISE, parser, save, seed_of

from decompound.fourier import FourierConfig
from decompound.risk import FourierSetting, sweep_t2


def main():
    p = parser(__doc__.splitlines()[0], 50)
    p.add_argument("--J", type=int, default=10_000)
    p.add_argument("--m", type=float, default=2.0)
    args = p.parse_args()
    seed = seed_of(args)
    t2_values = [0.25] + [round(0.1 * k, 10) for k in range(3, 31)]
    setting = FourierSetting(MIX2, NOISE, args.J, FourierConfig(t1=0.2, t2=1.0, m=args.m))
    rep = sweep_t2(setting, t2_values, args.replicates, seed, args.threads)
    for t2, mise, se in rep.rows():
        print(f"t2={t2:<5g} mise={mise:.5g}  se={se:.2g}")
    print(f"argmin t2={rep.argmin:g}")
    save(args, "t2_sweep.csv", ["t2", "mise", "stderr"], rep.rows(), seed)


if __name__ == "__main__":
    main()
