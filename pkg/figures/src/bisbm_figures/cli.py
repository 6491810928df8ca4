"""Standalone figure scripts: render_sweep, render_hist, render_adj."""

import argparse
import sys

from .render import FigureInputError, FigureSpec, render


def _run(spec):
    try:
        path = render(spec)
    except (FigureInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


def main_sweep(argv=None):
    parser = argparse.ArgumentParser(
        description="Median NMI curves with shaded 10-90% quantile bands, one "
                    "series per method, from an aggregate sweep CSV."
    )
    parser.add_argument("csv", help="aggregate CSV (method,lambda,nmi_q10,nmi_median,nmi_q90)")
    parser.add_argument("out", help="output image path (.png, .pdf, .svg)")
    parser.add_argument("--xlabel", default="mixing parameter")
    parser.add_argument("--ylabel", default="NMI")
    args = parser.parse_args(argv)
    return _run(FigureSpec("sweep", (args.csv,), args.out,
                           xlabel=args.xlabel, ylabel=args.ylabel))


def main_hist(argv=None):
    parser = argparse.ArgumentParser(
        description="Overlaid per-method final-score histograms from a "
                    "comparison CSV."
    )
    parser.add_argument("csv", help="comparison CSV (method,...,adjusted_score,...)")
    parser.add_argument("out", help="output image path")
    args = parser.parse_args(argv)
    return _run(FigureSpec("histogram", (args.csv,), args.out))


def main_adj(argv=None):
    parser = argparse.ArgumentParser(
        description="Bipartite incidence heatmap sorted by a partition."
    )
    parser.add_argument("edges", help="edge-list file (u<TAB>v[<TAB>mult])")
    parser.add_argument("types", help="types file (id<TAB>a|b)")
    parser.add_argument("partition", help="partition file (id<TAB>group)")
    parser.add_argument("out", help="output image path")
    args = parser.parse_args(argv)
    return _run(FigureSpec("adjacency", (args.edges, args.types, args.partition),
                           args.out))
