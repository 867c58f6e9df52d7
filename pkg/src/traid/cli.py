"""Command-line entry point: ``traid <subcommand> ...``.

Exit codes:
  0  success
  2  usage error (unknown subcommand, bad flags)
  3  malformed input (word string, signs, labels, trajectory file contents)
  4  file I/O failure
  5  mathematical domain error (impure word where a pure one is needed,
     trajectory through a triple point, invalid quantum numbers, ...)

Relative output paths are resolved against $TRAID_OUTPUT_DIR when it is set.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import core, harmonic, pure, representations, worldlines

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_IO, EXIT_DOMAIN = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "TRAID_OUTPUT_DIR"


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "), ensure_ascii=False)


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _write(path: str, text: str) -> Path:
    p = _out_path(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot write {p}: {exc}") from exc
    return p


def _word(args, text=None) -> core.Word:
    return core.parse_word(args.word if text is None else text, args.n)


# --- subcommands ------------------------------------------------------------


def cmd_normalize(args):
    w = core.normal_form(_word(args))
    return {"word": core.format_word(w), "length": len(w)}, core.format_word(w)


def cmd_equal(args):
    a, b = _word(args, args.a), _word(args, args.b)
    if args.brute_force:
        verdict = core.brute_force_equals(a, b, args.max_length)
        return {"verdict": verdict.value}, verdict.value
    eq = core.equals(a, b)
    return {"equal": eq}, "true" if eq else "false"


def cmd_perm(args):
    p = core.perm_image(_word(args))
    return {"images": list(p.images)}, " ".join(map(str, p.images))


def cmd_pure(args):
    ok = core.is_pure(_word(args))
    return {"pure": ok}, "true" if ok else "false"


def cmd_decompose(args):
    d = pure.transversal_decompose(_word(args))
    data = {
        "pure_part": core.format_word(d.pure_part),
        "perm": list(d.perm_part.images),
        "transversal": core.format_word(d.transversal_word),
    }
    text = f"pure: {data['pure_part']}\nperm: {' '.join(map(str, data['perm']))}\ntransversal: {data['transversal']}"
    return data, text


def cmd_gamma(args):
    w = pure.pt4_gamma(args.k)
    return {"k": args.k, "word": core.format_word(w)}, core.format_word(w)


def cmd_winding(args):
    if args.n != 4:
        raise CliError(EXIT_INPUT, "input", "winding vectors are defined for N = 4")
    wv = pure.winding_vector(_word(args))
    return wv.to_json(), dumps(wv.to_json())


def cmd_betti(args):
    b = pure.betti_lower_bound(args.N)
    return {"N": args.N, "betti": b}, str(b)


def cmd_codim(args):
    c = core.codimension(args.d, args.k)
    return {"d": args.d, "k": args.k, "codimension": c}, str(c)


def cmd_rep_abelian(args):
    rep = representations.AbelianRep.parse(args.signs)
    w = core.parse_word(args.word, rep.n_strands)
    v = representations.eval_abelian(rep, w)
    cls = representations.classify_abelian(rep).value
    return {"value": v, "class": cls}, f"{v:+d}"


def cmd_rep_coxeter(args):
    labels = representations.CoxeterLabels.parse(args.labels)
    w = core.parse_word(args.word, labels.n_strands)
    M = representations.eval_matrix(labels, w)
    rows = [[float(x) + 0.0 for x in row] for row in np.round(M, 12)]
    return {"labels": str(labels), "matrix": rows}, dumps(rows)


def cmd_diagram(args):
    colors = args.colors.split(",") if args.colors else None
    svg = worldlines.render_strand_diagram(
        _word(args), colors=colors, color_strands=not args.mono, labels=args.labels,
        width=args.width, height=args.height)
    if args.out:
        p = _write(args.out, svg)
        return {"svg": str(p)}, str(p)
    return {"svg": svg}, svg.rstrip("\n")


def cmd_choreography(args):
    tr = worldlines.word_to_choreography(_word(args))
    text = dumps(tr.to_json())
    if args.out:
        p = _write(args.out, text + "\n")
        return {"trajectory": str(p)}, str(p)
    return tr.to_json(), text


def cmd_extract_word(args):
    try:
        data = json.loads(Path(args.file).read_text())
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot read {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "input", f"{args.file} is not JSON: {exc}") from exc
    try:
        tr = worldlines.Trajectory.from_json(data)
    except (KeyError, TypeError) as exc:
        raise CliError(EXIT_INPUT, "input", f"bad trajectory file: {exc}") from exc
    except worldlines.TrajectoryError as exc:
        raise CliError(EXIT_INPUT, "input", str(exc)) from exc
    w = worldlines.trajectory_to_word(tr)
    return {"n": w.n_strands, "word": core.format_word(w)}, core.format_word(w)


def _rep3(text: str) -> representations.AbelianRep:
    rep = representations.AbelianRep.parse(text)
    if rep.n_strands != 3:
        raise CliError(EXIT_INPUT, "input", "the trapped model takes two signs, e.g. '+-'")
    return rep


def cmd_spectrum(args):
    rep = _rep3(args.rep)
    levels = harmonic.spectrum(rep, Fraction(args.emax))
    rows = []
    for level in levels:
        for st in level.states:
            rows.append({"energy": _frac(level.energy), "energy_value": float(level.energy),
                         "nu": st.nu, "lambda": _frac(st.lam), "degeneracy": level.degeneracy})
    text = "\n".join(
        f"E = {r['energy_value']:g}, ν = {r['nu']}, λ = {r['lambda']}, degeneracy = {r['degeneracy']}"
        for r in rows)
    return {"rep": str(rep), "levels": rows}, text


def cmd_field(args):
    rep = _rep3(args.rep)
    try:
        lam = Fraction(args.lam)
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_INPUT, "input", f"malformed lambda: {args.lam!r}") from None
    state = harmonic.EigenState(args.nu, lam, rep)
    grid = harmonic.field_grid(state, args.half_width, args.resolution)
    outputs = {}
    if args.out:
        lines = [",".join(f"{v:.10e}" for v in row) for row in grid]
        outputs["csv"] = str(_write(args.out, "\n".join(lines) + "\n"))
    if args.svg:
        outputs["svg"] = str(_write(args.svg, contour_svg(state, grid, args.half_width)))
    data = {"rep": str(rep), "nu": state.nu, "lambda": _frac(state.lam),
            "energy": _frac(state.energy), "shape": list(grid.shape), **outputs}
    if not outputs:
        data["grid"] = [[float(v) for v in row] for row in grid]
        return data, "\n".join(",".join(f"{v:.10e}" for v in row) for row in grid)
    return data, "\n".join(outputs.values())


def contour_svg(state, grid, half_width) -> str:
    """Contour plot with wall rays (t1 solid, t2 dashed) and, for half-integer lambda, the cut."""
    import io

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "traid"
    matplotlib.rcParams["svg.fonttype"] = "none"
    axis = np.linspace(-half_width, half_width, grid.shape[0])
    fig, ax = plt.subplots(figsize=(5, 5))
    vmax = float(np.max(np.abs(grid))) or 1.0
    ax.contourf(axis, axis, grid, levels=np.linspace(-vmax, vmax, 21), cmap="RdBu_r")
    ax.contour(axis, axis, grid, levels=[0.0], colors="k", linewidths=0.5)
    for j in range(6):
        phi = j * np.pi / 3
        style = "-" if harmonic.wall_generator(j) == 1 else "--"
        ax.plot([0, half_width * np.cos(phi)], [0, half_width * np.sin(phi)], "k", ls=style, lw=1)
    if state.lam.denominator != 1:
        ax.plot([0, half_width], [0, 0], color="red", lw=2)
    ax.set_aspect("equal")
    ax.set_title(f"rep {state.rep}, nu={state.nu}, lambda={_frac(state.lam)}")
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def cmd_selftest(args):
    """Random word pairs: normal-form equality against the exhaustive search."""
    rng = random.Random(args.seed)
    disagreements = 0
    for _ in range(args.pairs):
        a = core.make_word([rng.randint(1, args.n - 1) for _ in range(rng.randint(0, args.length))], args.n)
        b = core.make_word([rng.randint(1, args.n - 1) for _ in range(rng.randint(0, args.length))], args.n)
        verdict = core.brute_force_equals(a, b, args.max_length)
        if verdict is core.Verdict.INCONCLUSIVE or bool(verdict) != core.equals(a, b):
            disagreements += 1
    data = {"seed": args.seed, "pairs": args.pairs, "disagreements": disagreements}
    if disagreements:
        raise CliError(EXIT_DOMAIN, "selftest", dumps(data))
    return data, f"ok: {args.pairs} pairs, 0 disagreements"


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit canonical JSON")

    parser = argparse.ArgumentParser(
        prog="traid", description="Traid group words, windings, representations and trapped spectra.",
        epilog=__doc__.split("\n", 2)[2], formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    def word_cmd(name, func, help_):
        p = add(name, func, help_)
        p.add_argument("--n", type=int, required=True, help="number of strands N")
        p.add_argument("word", help='word, e.g. "t1 t2 t1" or "121"')
        return p

    word_cmd("normalize", cmd_normalize, "shortlex normal form")
    p = add("equal", cmd_equal, "decide equality of two words")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--brute-force", action="store_true", help="use the exhaustive search oracle")
    p.add_argument("--max-length", type=int, default=12)
    word_cmd("perm", cmd_perm, "permutation image (final position of each particle)")
    word_cmd("pure", cmd_pure, "is the word pure?")
    word_cmd("decompose", cmd_decompose, "pure part times transversal lift")
    p = add("gamma", cmd_gamma, "generator gamma_k of PT_4")
    p.add_argument("k", type=int, choices=range(1, 9), metavar="k")
    word_cmd("winding", cmd_winding, "winding vector of a pure T_4 word")
    p = add("betti", cmd_betti, "Betti-number lower bound on the rank of PT_N")
    p.add_argument("N", type=int)
    p = add("codim", cmd_codim, "co-dimension d(k-1) of k-body coincidences in d dimensions")
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)

    rep = sub.add_parser("rep", help="evaluate representations", parents=[common])
    rep_sub = rep.add_subparsers(dest="rep_kind", required=True, metavar="KIND")
    p = rep_sub.add_parser("abelian", help="abelian sign representation", parents=[common])
    p.set_defaults(func=cmd_rep_abelian)
    p.add_argument("--signs", required=True, help='e.g. "+-" or "pm" (one sign per generator)')
    p.add_argument("--word", required=True)
    p = rep_sub.add_parser("coxeter", help="geometric reflection rep of a Coxeter quotient",
                           parents=[common])
    p.set_defaults(func=cmd_rep_coxeter)
    p.add_argument("--labels", required=True, help='e.g. "5,3" or "inf,inf"')
    p.add_argument("--word", required=True)

    p = word_cmd("diagram", cmd_diagram, "SVG strand diagram")
    p.add_argument("--out")
    p.add_argument("--colors", help="comma-separated strand colors")
    p.add_argument("--mono", action="store_true", help="draw all strands black")
    p.add_argument("--labels", action="store_true", help="label crossings with generators")
    p.add_argument("--width", type=float)
    p.add_argument("--height", type=float)
    p = word_cmd("choreography", cmd_choreography, "trajectory JSON realizing a word")
    p.add_argument("--out")
    p = add("extract-word", cmd_extract_word, "read the word off a trajectory JSON file")
    p.add_argument("file")

    p = add("spectrum", cmd_spectrum, "three-body trapped relative spectrum")
    p.add_argument("--rep", required=True, help='signs of (t1, t2), e.g. "+-" or "mm"')
    p.add_argument("--emax", required=True, help="energy cutoff in units of hbar omega")
    p = add("field", cmd_field, "wave function on a Cartesian grid")
    p.add_argument("--rep", required=True, help='signs of (t1, t2), e.g. "+-"')
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--lambda", dest="lam", required=True, help='e.g. "3/2"')
    p.add_argument("--half-width", type=float, default=4.0)
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", help="contour plot output path")

    p = add("selftest", cmd_selftest, "randomized normal-form vs oracle comparison")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--length", type=int, default=6)
    p.add_argument("--max-length", type=int, default=10)
    return parser


_DOMAIN_ERRORS = (pure.PurityError, pure.NonIntegerHolonomy, worldlines.TrajectoryError,
                  harmonic.StateError)
_INPUT_ERRORS = (core.WordError, representations.RepresentationError)


_SIGN_FLAGS = ("--rep", "--signs")


def _protect_signs(argv):
    """argparse reads "--" and "-+" as options; pass sign strings as p/m instead."""
    out = []
    it = iter(argv)
    for tok in it:
        flag, eq, value = tok.partition("=")
        if flag in _SIGN_FLAGS and not eq:
            value = next(it, None)
            if value is None:
                out.append(tok)
                break
        if flag in _SIGN_FLAGS:
            if value and set(value) <= {"+", "-"}:
                value = value.replace("+", "p").replace("-", "m")
            out.append(f"{flag}={value}")
        else:
            out.append(tok)
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _protect_signs(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(args, "json", False)
    try:
        try:
            data, text = args.func(args)
        except _DOMAIN_ERRORS as exc:
            raise CliError(EXIT_DOMAIN, type(exc).__name__, str(exc)) from exc
        except _INPUT_ERRORS as exc:
            raise CliError(EXIT_INPUT, type(exc).__name__, str(exc)) from exc
        except ValueError as exc:
            raise CliError(EXIT_INPUT, "input", str(exc)) from exc
        except OSError as exc:
            raise CliError(EXIT_IO, "io", str(exc)) from exc
    except CliError as exc:
        if as_json:
            print(dumps({"error": exc.kind, "message": str(exc), "exit_code": exc.code}), file=stderr)
        else:
            print(f"error ({exc.kind}): {exc}", file=stderr)
        return exc.code
    print(dumps(data) if as_json else text, file=stdout)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
