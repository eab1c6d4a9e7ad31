"""Time-step convergence of both splittings against the exact sech soliton."""
import argparse

import numpy as np

from nlse_tunnel import fields as F
from nlse_tunnel.grid import make_grid
from nlse_tunnel.potentials import PotentialSpec
from nlse_tunnel.solver import SimulationConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--amplitude", type=float, default=0.5)
    ap.add_argument("--t-end", type=float, default=1.0)
    ap.add_argument("--dts", type=float, nargs="+", default=[8e-3, 4e-3, 2e-3, 1e-3, 5e-4])
    args = ap.parse_args()

    grid = make_grid()
    exact = F.sech_soliton(grid, args.t_end, args.amplitude).values
    print(f"{'dt':>8} {'lie_verbatim':>14} {'strang':>14}")
    table = {"lie_verbatim": [], "strang": []}
    for dt in args.dts:
        steps = int(round(args.t_end / dt))
        for splitting, errs in table.items():
            cfg = SimulationConfig(dt=dt, t_end=args.t_end, snapshot_every=steps, splitting=splitting)
            traj = run(F.sech_soliton(grid, 0.0, args.amplitude), PotentialSpec(), cfg)
            errs.append(np.max(np.abs(traj.values[-1] - exact)))
        print(f"{dt:8.1e} {table['lie_verbatim'][-1]:14.3e} {table['strang'][-1]:14.3e}")
    for splitting, errs in table.items():
        slope = np.polyfit(np.log(args.dts), np.log(errs), 1)[0]
        print(f"observed order ({splitting}): {slope:.3f}")


if __name__ == "__main__":
    main()
