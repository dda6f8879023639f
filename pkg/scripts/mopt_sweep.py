"""MISE against the spectral cutoff, with the adaptive cutoff alongside.

Mixture 0.3 N(-2, 1) + 0.7 N(2, 1) jumps, N(0, 1) noise, J = 10^4.
"""

import numpy as np
from _common import MIX2, NOISE, parser, save, seed_of

from decompound.fourier import CUTOFF_RULES, FourierConfig
from decompound.risk import FourierSetting, sweep_cutoff


def main():
    p = parser(__doc__.splitlines()[0], 50)
    p.add_argument("--J", type=int, default=10_000)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--cutoff-rule", choices=CUTOFF_RULES, default="last")
    args = p.parse_args()
    seed = seed_of(args)
    cfg = FourierConfig(t1=0.5, t2=1.0, kappa=args.kappa, alpha=args.alpha)
    setting = FourierSetting(MIX2, NOISE, args.J, cfg, cutoff_rule=args.cutoff_rule)
    m_values = [0.25 * k for k in range(1, 25)]
    rep = sweep_cutoff(setting, m_values, args.replicates, seed, args.threads, adaptive=True)
    a = rep.extra["adaptive"]
    print(f"argmin m={rep.argmin:g}  min mise={np.min(rep.mise):.5g}")
    print(f"adaptive ({args.cutoff_rule}) mise={a['mise']:.5g} se={a['stderr']:.2g} "
          f"m_hat median={np.median(a['m_hat']):.3g}")
    save(args, "mopt_sweep.csv", ["m", "mise", "stderr"], rep.rows(), seed)
    save(args, "mopt_adaptive.csv", ["replicate", "m_hat", "loss"],
         zip(range(len(a["m_hat"])), a["m_hat"], a["losses"]), seed)


if __name__ == "__main__":
    main()
