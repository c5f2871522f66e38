#!/usr/bin/env python3
"""Write a small DAX-format workflow with seeded runtimes.

The job names follow the transformation stages of the Inspiral and
CyberShake workflows; runtimes are drawn from log-normal distributions and
are not taken from any published trace.
"""
import argparse
import random

STAGES = {
    "inspiral": [("TmpltBank", 0.25, 18.0), ("Inspiral", 0.45, 460.0),
                 ("Thinca", 0.1, 5.0), ("TrigBank", 0.1, 5.0), ("Inspiral_2", 0.1, 420.0)],
    "cybershake": [("ExtractSGT", 0.1, 110.0), ("SeismogramSynthesis", 0.45, 35.0),
                   ("PeakValCalcOkaya", 0.4, 1.0), ("ZipSeis", 0.025, 10.0), ("ZipPSA", 0.025, 8.0)],
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("workflow", choices=sorted(STAGES))
    ap.add_argument("--jobs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    stages = STAGES[args.workflow]
    names = [s[0] for s in stages]
    weights = [s[1] for s in stages]
    means = {s[0]: s[2] for s in stages}

    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<adag name="{args.workflow}" jobCount="{args.jobs}" version="2.1">']
    ids = []
    for k in range(args.jobs):
        name = rng.choices(names, weights)[0]
        runtime = round(rng.lognormvariate(0.0, 0.5) * means[name], 2)
        jid = f"ID{k:05d}"
        ids.append(jid)
        lines.append(f'  <job id="{jid}" namespace="{args.workflow}" name="{name}" version="1.0" runtime="{runtime}">')
        lines.append(f'    <uses file="{jid}.out" link="output" register="false" transfer="false" size="{rng.randint(1000, 900000)}"/>')
        lines.append('  </job>')
    for k in range(1, args.jobs):
        parent = ids[rng.randrange(k)]
        lines.append(f'  <child ref="{ids[k]}">')
        lines.append(f'    <parent ref="{parent}"/>')
        lines.append('  </child>')
    lines.append('</adag>')
    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
