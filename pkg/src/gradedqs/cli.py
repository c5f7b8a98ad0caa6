"""Command-line front end.

    gradedqs verify <suite> [--seed S] [--trials N] [--case C] [--n N] ...
    gradedqs factor transvection --case symplectic --vector "x, 0, y, 0, 0, 0"
    gradedqs patch --primes 2,3 --matrix "1 + x^2, x, 0; x, 1, 0; 0, 0, 1"
    gradedqs complete --row 2,3,4 --instance fp:5
    gradedqs eval --poly "1 + x + x^2" --at 2

Exit codes: 0 success / suite pass, 1 suite fail, 2 usage error,
3 malformed input or a violated precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import GradedQSError, ParseError, StructuralError
from .localization import (
    LocalIntegers,
    PrimeField,
    ResidueRing,
    comaximal_powers,
    complete_unimodular,
    localize_word,
    row_times_word,
    telescoping_patch,
)
from .matrices import GroupCase, MatrixG
from .poly import GradedPoly
from .rings import CoefficientRing, ZZ
from .suites import DEFAULT_SEED, SUITES, SuiteConfig, run_suite
from .words import ElemWord, normalize_mod_plus, split_word, transvection_word

VERBS = ("verify", "factor", "patch", "complete", "eval")
FACTOR_KINDS = ("transvection", "normalize", "split")


@dataclass
class Command:
    verb: str
    target: Optional[str] = None
    case: Optional[str] = None
    n: Optional[int] = None
    ring: CoefficientRing = ZZ
    ring_given: bool = False
    nvars: Optional[int] = None
    seed: int = DEFAULT_SEED
    trials: Optional[int] = None
    primes: Optional[tuple] = None
    dilation_exponent: Optional[List[int]] = None
    input: Optional[str] = None
    json: bool = False
    timing: bool = True
    literals: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _ring(text: str) -> CoefficientRing:
    try:
        return CoefficientRing.from_spec(text)
    except GradedQSError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--case", choices=[c.value for c in GroupCase])
    p.add_argument("--n", type=int)
    p.add_argument("--ring", type=_ring, help="int | rat | fp:<p>")
    p.add_argument("--vars", dest="nvars", type=int, help="number of polynomial variables")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int)
    p.add_argument("--primes", type=_int_list, help="comma-separated localizing elements, e.g. 2,3,5")
    p.add_argument("--dilation-exponent", type=_int_list, help="one exponent, or one per prime")
    p.add_argument("--input", help="JSON input file")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--no-timing", action="store_true", help="omit timings (byte-identical reruns)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gradedqs", description="Graded Quillen-Suslin toolkit")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    _common(p)
    p = sub.add_parser("factor", help="emit a factorization witness")
    p.add_argument("kind", choices=FACTOR_KINDS)
    _common(p)
    p.add_argument("--vector", help="comma-separated entries of w (transvection)")
    p.add_argument("--word", help="word literal such as '1,2:x; 2,1:-x' (normalize, split)")
    p = sub.add_parser("patch", help="telescoping patch over a partition of unity")
    _common(p)
    p.add_argument("--matrix", help="matrix literal, rows separated by ';'")
    p = sub.add_parser("complete", help="complete a unimodular row")
    _common(p)
    p.add_argument("--row", required=True, help="comma-separated entries (integers or fractions)")
    p.add_argument("--instance", default=None, help="fp:<p> | mod:<p>^<k> | loc:<p>")
    p = sub.add_parser("eval", help="evaluate b+(t) for a polynomial, matrix or word")
    _common(p)
    p.add_argument("--poly")
    p.add_argument("--matrix")
    p.add_argument("--at", default="1", help="degree-zero value t")
    return parser


def parse_command(argv: Sequence[str]) -> Command:
    ns = build_parser().parse_args(list(argv))
    literals = {
        k: getattr(ns, k)
        for k in ("vector", "word", "matrix", "row", "instance", "poly", "at")
        if getattr(ns, k, None) is not None
    }
    return Command(
        verb=ns.verb,
        target=getattr(ns, "suite", None) or getattr(ns, "kind", None),
        case=ns.case,
        n=ns.n,
        ring=ns.ring or ZZ,
        ring_given=ns.ring is not None,
        nvars=ns.nvars,
        seed=ns.seed,
        trials=ns.trials,
        primes=tuple(ns.primes) if ns.primes else None,
        dilation_exponent=ns.dilation_exponent,
        input=ns.input,
        json=ns.json,
        timing=not ns.no_timing,
        literals=literals,
    )


# ---------------------------------------------------------------------------
# verbs


def _emit(obj, cmd: Command, text: str | None = None):
    if cmd.json or text is None:
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _nvars(cmd: Command, default: int = 1) -> int:
    return default if cmd.nvars is None else cmd.nvars


def cmd_verify(cmd: Command) -> int:
    names = list(SUITES) if cmd.target == "all" else [cmd.target]
    dil = cmd.dilation_exponent[0] if cmd.dilation_exponent else None
    cfg = SuiteConfig(
        seed=cmd.seed,
        trials=cmd.trials,
        case=cmd.case,
        n=cmd.n,
        ring=cmd.ring if cmd.ring_given else None,
        nvars=cmd.nvars,
        primes=cmd.primes,
        dilation_exponent=dil,
    )
    reports = [run_suite(name, cfg) for name in names]
    ok = all(r.passed for r in reports)
    payload = [r.to_json(cmd.timing) for r in reports]
    lines = []
    for r in reports:
        t = f" in {r.elapsed:.2f}s" if cmd.timing else ""
        lines.append(f"{r.suite}: {r.verdict} ({r.trials} trials, {len(r.failures)} failures{t})")
    _emit(payload[0] if len(payload) == 1 else payload, cmd, "\n".join(lines))
    return 0 if ok else 1


def _parse_word_literal(text: str, case: GroupCase, n: int, like: GradedPoly) -> ElemWord:
    """'i,j:arg; i,j:arg' -> ElemWord."""
    from .words import ElemGen

    gens = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        try:
            idx, arg = item.split(":", 1)
            i, j = (int(x) for x in idx.split(","))
        except ValueError:
            raise ParseError(f"bad generator literal {item!r} (expected 'i,j:arg')") from None
        gens.append(ElemGen.make(case, n, i, j, GradedPoly.parse(arg, like.ring, like.nvars)))
    if not gens:
        return ElemWord.empty(case, n, like)
    return ElemWord(case, n, tuple(gens), like)


def _load_word(cmd: Command, like: GradedPoly) -> ElemWord:
    if cmd.input:
        data = _read_json(cmd.input)
        if isinstance(data, dict) and "word" in data:
            data = data["word"]
        return ElemWord.from_json(data, like)
    if "word" in cmd.literals:
        case = GroupCase.parse(cmd.case or "linear")
        n = cmd.n or case.min_size
        return _parse_word_literal(cmd.literals["word"], case, n, like)
    raise ParseError("need --input or --word")


def cmd_factor(cmd: Command) -> int:
    like = GradedPoly.constant(cmd.ring, _nvars(cmd, 2), 0)
    if cmd.target == "transvection":
        case = GroupCase.parse(cmd.case or "linear")
        if cmd.input:
            data = _read_json(cmd.input)
            entries = data["w"] if isinstance(data, dict) else data
            w = tuple(
                GradedPoly.from_json(e) if isinstance(e, dict) else GradedPoly.parse(str(e), like.ring, like.nvars)
                for e in entries
            )
        elif "vector" in cmd.literals:
            w = tuple(GradedPoly.parse(e, like.ring, like.nvars) for e in cmd.literals["vector"].split(","))
        else:
            raise ParseError("need --input or --vector")
        if cmd.n is not None and cmd.n != len(w):
            raise StructuralError(f"--n {cmd.n} disagrees with a vector of length {len(w)}")
        word = transvection_word(case, w)
        out = {"kind": "transvection", "w": [str(x) for x in w], "word": word.to_json(), "matrix": word.evaluate().to_json()}
        _emit(out, cmd, f"I + M(e1, w) = {word}")
        return 0
    word = _load_word(cmd, like)
    if cmd.target == "split":
        out = split_word(word)
        _emit({"kind": "split", "word": out.to_json()}, cmd, str(out))
        return 0
    cw = normalize_mod_plus(word)
    out = {
        "kind": "normalize",
        "target": word.evaluate().to_json(),
        "factors": [
            {"conjugator": eps.to_json(), "core": core.to_json()} for eps, core in cw.pairs
        ],
        "checked": True,
    }
    text = " * ".join(f"[{eps}] {core} [{eps}]^-1" for eps, core in cw.pairs) or "I"
    _emit(out, cmd, text)
    return 0


DEFAULT_PATCH_MATRIX = "1 + x^2, x, 0; x, 1, 0; 0, 0, 1"  # E12(x) E21(x)


def cmd_patch(cmd: Command) -> int:
    nvars = _nvars(cmd, 1)
    local_words = None
    if cmd.input:
        data = _read_json(cmd.input)
        if isinstance(data, dict) and "gens" in data:
            like = GradedPoly.constant(cmd.ring, nvars, 0)
            word = ElemWord.from_json(data, like)
            a = word.evaluate()
        elif isinstance(data, dict) and "entries" in data:
            word, a = None, MatrixG.from_json(data)
        else:
            raise ParseError("patch input must be a word or a matrix JSON object")
    else:
        word = None
        a = MatrixG.parse(cmd.literals.get("matrix", DEFAULT_PATCH_MATRIX), cmd.ring, nvars)
    primes = list(cmd.primes or (2, 3))
    if cmd.dilation_exponent:
        exps = cmd.dilation_exponent
        if len(exps) == 1:
            exps = exps * len(primes)
        if len(exps) != len(primes):
            raise StructuralError("need one dilation exponent, or one per prime")
    else:
        exps = [1] * len(primes)
    if word is not None and cmd.case is not None and word.case is not GroupCase.parse(cmd.case):
        raise StructuralError("--case disagrees with the case of the input word")
    if word is not None and a.like.ring.kind == "int":
        local_words = [localize_word(word, s) for s in primes]
    cd = comaximal_powers(primes, exps, a.like.ring)
    pw = telescoping_patch(a, cd, local_words)
    text = f"checked={pw.checked}; b = {list(map(str, cd.combined))}\n" + "\n".join(
        f"F{i}: {f}" for i, f in enumerate(pw.factors, 1)
    )
    _emit(pw.to_json(), cmd, text)
    return 0


def _instance(cmd: Command):
    spec = cmd.literals.get("instance")
    if spec is None:
        if cmd.ring_given and cmd.ring.kind == "fp":
            return PrimeField(cmd.ring.p)
        raise ParseError("need --instance fp:<p> | mod:<p>^<k> | loc:<p> (or --ring fp:<p>)")
    kind, _, rest = spec.partition(":")
    try:
        if kind == "fp":
            return PrimeField(CoefficientRing.from_spec(spec).p)
        if kind == "mod":
            p, _, k = rest.partition("^")
            return ResidueRing(int(p), int(k or 1))
        if kind == "loc":
            return LocalIntegers(int(rest))
    except ValueError:
        pass
    raise ParseError(f"bad instance {spec!r}")


def cmd_complete(cmd: Command) -> int:
    inst = _instance(cmd)
    try:
        row = [Fraction(x.strip()) for x in cmd.literals["row"].split(",")]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad row {cmd.literals['row']!r}") from None
    row = [int(x) if x.denominator == 1 else x for x in row]
    word = complete_unimodular(row, inst)
    image = row_times_word(row, word, inst)
    out = {"row": [str(x) for x in row], "word": word.to_json(), "image": [str(x) for x in image]}
    _emit(out, cmd, f"{word}  ->  {tuple(str(x) for x in image)}")
    return 0


def cmd_eval(cmd: Command) -> int:
    nvars = _nvars(cmd, 1)
    try:
        t = Fraction(cmd.literals.get("at", "1"))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad value for --at: {cmd.literals.get('at')!r}") from None
    t = int(t) if t.denominator == 1 else t
    if "poly" in cmd.literals:
        p = GradedPoly.parse(cmd.literals["poly"], cmd.ring, nvars)
        out = p.plus_eval(t)
        _emit({"input": p.to_json(), "t": str(t), "value": out.to_json()}, cmd, str(out))
        return 0
    if "matrix" in cmd.literals:
        m = MatrixG.parse(cmd.literals["matrix"], cmd.ring, nvars)
    elif cmd.input:
        data = _read_json(cmd.input)
        like = GradedPoly.constant(cmd.ring, nvars, 0)
        m = ElemWord.from_json(data, like).evaluate() if "gens" in data else MatrixG.from_json(data)
    else:
        raise ParseError("need --poly, --matrix or --input")
    out = m.plus_eval(t)
    _emit({"t": str(t), "value": out.to_json()}, cmd, str(out))
    return 0


HANDLERS = {
    "verify": cmd_verify,
    "factor": cmd_factor,
    "patch": cmd_patch,
    "complete": cmd_complete,
    "eval": cmd_eval,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_command(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[cmd.verb](cmd)
    except (GradedQSError, KeyError, TypeError) as exc:
        # KeyError/TypeError here come from malformed JSON documents
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
