"""Shared argument handling for the experiment scripts."""

import argparse
import os

from decompound.cli import write_csv
from decompound.laws import Gaussian, GaussianMixture
from decompound.rng import resolve_seed

MIX35 = GaussianMixture((0.3, 0.7), (-3.5, 3.5), (1.0, 1.0))
MIX2 = GaussianMixture((0.3, 0.7), (-2.0, 2.0), (1.0, 1.0))
NOISE = Gaussian(0, 1)


def parser(description, replicates):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--replicates", type=int, default=replicates)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-dir", default="results")
    return p


def seed_of(args):
    return resolve_seed(args.seed)


def save(args, name, header, rows, seed):
    path = os.path.join(args.out_dir, name)
    rows = list(rows)
    write_csv(path, header, rows, seed)
    print(f"wrote {len(rows)} rows to {path}")
