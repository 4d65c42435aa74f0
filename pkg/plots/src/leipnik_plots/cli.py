"""`plot <kind> <input...> -o <output>` entry point.

Kinds:
  states    states.csv        -> stacked time-series panels (one image)
  phase     states.csv        -> 3-D phase portrait + projections (one image)
  surfaces  <sync run dir>    -> surface_master/slave/error.png + phase_x5.png

Inputs are read-only; exit code 1 with a one-line message on bad inputs.
"""

from __future__ import annotations

import argparse
import sys

from .figures import plot_phase, plot_states, plot_surfaces
from .io import PlotInputError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    parser.add_argument("kind", choices=["states", "phase", "surfaces"])
    parser.add_argument("inputs", nargs="+", help="states.csv or a sync run directory")
    parser.add_argument("-o", "--output", required=True, help="image path (states/phase) or directory (surfaces)")
    args = parser.parse_args(argv)

    try:
        if args.kind == "states":
            caption = plot_states(args.inputs[0], args.output)
            print(f"wrote {args.output}: {caption}")
        elif args.kind == "phase":
            caption = plot_phase(args.inputs[0], args.output)
            print(f"wrote {args.output}: {caption}")
        else:
            captions = plot_surfaces(args.inputs[0], args.output)
            for caption in captions:
                print(caption)
            print(f"wrote 4 images under {args.output}")
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
