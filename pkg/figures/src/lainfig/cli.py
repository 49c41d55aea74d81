"""CLI: render one spec file or every family found in a results directory."""

from __future__ import annotations

import argparse
import json
import sys


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lainsim-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render plot(s) from CSVs")
    group = p_render.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="YAML plot spec file")
    group.add_argument("--all", dest="results_dir",
                       help="results directory with scenario CSVs")
    p_render.add_argument("--output-dir", default=None)
    p_render.add_argument("--smoothing-window", type=int, default=25)
    args = parser.parse_args(argv)

    from .render import render, render_all
    from .spec import load_spec

    try:
        if args.spec:
            spec = load_spec(args.spec)
            render(spec)
            print(spec.output_image)
        else:
            for path in render_all(args.results_dir, args.output_dir,
                                   args.smoothing_window):
                print(path)
    except Exception as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
