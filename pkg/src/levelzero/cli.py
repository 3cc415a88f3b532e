"""Command-line front end.

Subcommands:
  chartab     build a character table and print/serialize it
  decompose   decompose inductions of tau_I into irreducibles
  zelevinsky  evaluate an expression in the graded induction ring
  verify      run one named checker (main, corollary, or a lemma)
  sweep       run the theorem verifiers over a configuration grid

Exit codes: 0 all checks pass, 1 a check failed, 2 usage / config error,
3 enumeration budget exceeded.  Output is deterministic for a fixed
config: rerunning a command produces byte-identical bytes.

Expression grammar for the zelevinsky subcommand (EBNF):

  expr    = term , { "+" , term } ;
  term    = factor , { "*" , factor } ;
  factor  = integer | ident | call | "(" , expr , ")" ;
  call    = ( "ind" , "(" , expr , { "," , expr } , ")" )
          | ( "D" , "(" , expr , ")" ) ;
  ident   = "1_R"                 (* the grade-0 unit *)
          | "chi" , integer       (* GL_1 character, table row *)
          | "X" , integer , "_" , integer ;  (* row i of GL_n: Xi_n *)

`ind` multiplies its arguments in the ring (parabolic induction), `D` is
the derivative operator, and a bare integer is a scalar coefficient.
"""

import argparse
import json
import re
import sys

from .chartheory import character_table, decompose, serialize_table
from .glnfq import (D_map, IrrLabel, ZElem, all_labels, is_cuspidal,
                    zelem_to_text)
from .ringmat import (BudgetExceeded, Partition, enumerate_gl,
                      lattice_stabilizer_check, subgroup)
from .typicality import (REPORT_SCHEMA, build_tau_I, casselman_clifford_form,
                         casselman_u_i, certify_orbit_condition,
                         clifford_decomposition_check, clifford_orbits,
                         ind_level, iwahori_induction_check,
                         level_zero_classes, trace_pairing_injective,
                         u_m_character, verify_corollary, verify_main_theorem)
from .chartheory import ClassFunction

FAST_GRID = [(2, 2, 2), (2, 2, 3), (2, 3, 2)]
STRETCH_GRID = [(3, 2, 2)]


class UsageError(Exception):
    pass


# -- expression mini-language ----------------------------------------


_TOKEN = re.compile(r"\s*(?:(\d+_R|\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        num, word, punct = m.groups()
        if num is not None:
            out.append(("unit" if num.endswith("_R") else "int", num))
        elif word is not None:
            out.append(("word", word))
        elif punct.strip():
            if punct not in "+*(),":
                raise UsageError("unexpected character %r in expression" % punct)
            out.append((punct, punct))
    out.append(("end", ""))
    return out


class _ExprParser:
    def __init__(self, text, q):
        self.toks = _tokenize(text)
        self.pos = 0
        self.q = q

    def _peek(self):
        return self.toks[self.pos][0]

    def _next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def _expect(self, kind):
        tok = self._next()
        if tok[0] != kind:
            raise UsageError("expected %r, got %r" % (kind, tok[1] or "end"))
        return tok

    def parse(self):
        value = self.expr()
        self._expect("end")
        return value

    def expr(self):
        value = self.term()
        while self._peek() == "+":
            self._next()
            value = value + self.term()
        return value

    def term(self):
        value = self.factor()
        while self._peek() == "*":
            self._next()
            value = value * self.factor()
        return value

    def factor(self):
        kind, text = self._next()
        if kind == "int":
            return int(text)
        if kind == "unit":
            return ZElem.unit(self.q)
        if kind == "(":
            value = self.expr()
            self._expect(")")
            return value
        if kind == "word":
            if self._peek() == "(":
                return self.call(text)
            return self.ident(text)
        raise UsageError("unexpected token %r" % (text or "end"))

    def call(self, name):
        self._expect("(")
        args = [self.expr()]
        while self._peek() == ",":
            self._next()
            args.append(self.expr())
        self._expect(")")
        args = [a if isinstance(a, ZElem) else a * ZElem.unit(self.q)
                for a in args]
        if name == "ind":
            value = args[0]
            for a in args[1:]:
                value = value * a
            return value
        if name == "D":
            if len(args) != 1:
                raise UsageError("D takes exactly one argument")
            return D_map(args[0])
        raise UsageError("unknown function %r" % name)

    def ident(self, name):
        if name == "1_R":
            return ZElem.unit(self.q)
        m = re.fullmatch(r"chi(\d+)", name)
        if m:
            return ZElem.of(IrrLabel(self.q, 1, int(m.group(1))))
        m = re.fullmatch(r"X(\d+)_(\d+)", name)
        if m:
            return ZElem.of(IrrLabel(self.q, int(m.group(2)), int(m.group(1))))
        raise UsageError("unknown identifier %r" % name)


def eval_ring_expr(text, q):
    value = _ExprParser(text, q).parse()
    if not isinstance(value, ZElem):
        value = value * ZElem.unit(q)
    # touch every label so malformed indices fail here, not on print
    for lab in value.coeffs:
        lab.dim()
    return value


# -- shared config parsing -------------------------------------------


def _partition_arg(text):
    try:
        parts = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError("bad partition %r; expected e.g. 1,1" % text)
    if not parts or any(k <= 0 for k in parts):
        raise UsageError("partition parts must be positive")
    return Partition(parts)


def _cuspidal_labels(I, p, text):
    if text:
        try:
            idxs = [int(t) for t in text.split(",")]
        except ValueError:
            raise UsageError("bad cuspidal indices %r" % text)
    else:
        idxs = []
        for k in I.parts:
            cands = [lab.index for lab in all_labels(k, p) if is_cuspidal(lab)]
            idxs.append(cands[0])
    if len(idxs) != I.r:
        raise UsageError("need one cuspidal index per partition part")
    labels = [IrrLabel(p, k, i) for k, i in zip(I.parts, idxs)]
    for lab in labels:
        if not is_cuspidal(lab):
            raise UsageError("%s is not cuspidal for GL_%d(F_%d)"
                             % (lab.name(), lab.n, lab.q))
    return labels


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# -- subcommands -----------------------------------------------------


def cmd_chartab(args):
    G = enumerate_gl(args.n, args.p, args.m, args.budget)
    table = character_table(G, verify="full" if args.verify else "auto")
    _emit(serialize_table(table), args.out)
    return 0


def cmd_decompose(args):
    I = _partition_arg(args.I)
    labels = _cuspidal_labels(I, args.p, args.cuspidals)
    tau = build_tau_I(I, labels, args.M)
    if not 1 <= args.m <= args.M:
        raise UsageError("need 1 <= m <= M")
    table = character_table(tau.G)
    rows = []
    for name, chi in (("ind_level_%d" % args.m, ind_level(tau, args.m)),
                      ("u_%d" % args.m, u_m_character(tau, args.m))):
        dec = decompose(chi, table)
        rows.append({
            "character": name,
            "dim": int(chi.dim().rational_value()),
            "genuine": dec.genuine,
            "constituents": [
                {"label": table.irreducibles[i].label,
                 "dim": int(table.irreducibles[i].dim().rational_value()),
                 "multiplicity": c}
                for i, c in enumerate(dec.as_ints()) if c],
        })
    payload = {
        "schema": REPORT_SCHEMA,
        "config": {"n": I.n, "p": args.p, "M": args.M, "m": args.m,
                   "partition": list(I.parts),
                   "cuspidals": [lab.name() for lab in labels]},
        "decompositions": rows,
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_zelevinsky(args):
    value = eval_ring_expr(args.expr, args.q)
    _emit(zelem_to_text(value) + "\n", args.out)
    return 0


def cmd_verify(args):
    I = _partition_arg(args.I) if args.I else None
    runner = _VERIFIERS.get(args.target)
    if runner is None:
        raise UsageError("unknown verification target %r" % args.target)
    payload, passed = runner(args, I)
    _emit(payload, args.out)
    return 0 if passed else 1


def _need(args, I, *names):
    if "I" in names and I is None:
        raise UsageError("this target needs --I")
    for name in names:
        if name != "I" and getattr(args, name) is None:
            raise UsageError("this target needs --%s" % name)


def _verify_main(args, I):
    _need(args, I, "I", "p", "M", "m")
    labels = _cuspidal_labels(I, args.p, args.cuspidals)
    rep = verify_main_theorem(I, labels, args.m, args.M, args.budget)
    return rep.to_json() + "\n", rep.passed


def _verify_corollary(args, I):
    _need(args, I, "I", "p", "M")
    labels = _cuspidal_labels(I, args.p, args.cuspidals)
    rep = verify_corollary(I, labels, args.M, args.budget)
    return rep.to_json() + "\n", rep.passed


def _verify_clifford(args, I):
    _need(args, I, "I", "p", "M", "m")
    ok = clifford_decomposition_check(I, args.m, args.M, args.p, args.budget)
    return _check_json("clifford", args, I, ok), ok


def _verify_orbits(args, I):
    _need(args, I, "I", "p", "M", "m")
    orbits = clifford_orbits(I, args.m, args.M, args.p, args.budget)
    ok = True
    for orb in orbits:
        if orb.is_zero():
            continue
        certify_orbit_condition(orb.A, I, args.p)
    return _check_json("orbits", args, I, ok,
                       extra={"orbit_sizes": [len(o.orbit) for o in orbits]}), ok


def _verify_casselman(args, I):
    _need(args, None, "p", "M", "m")
    if args.m < 2:
        raise UsageError("the Casselman piece needs --m >= 2")
    results = []
    ok = True
    for varpi in all_labels(1, args.p):
        chi = casselman_u_i(varpi, args.m, args.M, args.budget)
        table = character_table(chi.group)
        irreducible = decompose(chi, table).genuine and \
            sum(decompose(chi, table).as_ints()) == 1
        equal = chi == casselman_clifford_form(varpi, args.m, args.M,
                                               budget=args.budget)
        ok = ok and irreducible and equal
        results.append({"varpi": varpi.name(),
                        "dim": int(chi.dim().rational_value()),
                        "irreducible": irreducible,
                        "matches_layer_form": equal})
    return _check_json("casselman", args, None, ok,
                       extra={"pieces": results}), ok


def _verify_iwahori(args, I):
    _need(args, I, "I", "p", "M", "m")
    G = enumerate_gl(I.n, args.p, args.M, args.budget)
    J1 = subgroup(G, ("P1m", I, args.m))
    J2 = subgroup(G, ("P", I, args.m))
    ok = iwahori_induction_check(J1, J2, ClassFunction.trivial(J2), I)
    return _check_json("iwahori", args, I, ok), ok


def _verify_lattice(args, I):
    _need(args, I, "I", "p", "M", "m")
    ok = lattice_stabilizer_check(I, args.m, args.M, args.p, args.budget)
    return _check_json("lattice", args, I, ok), ok


def _verify_trace(args, I):
    _need(args, None, "p")
    ok = all(trace_pairing_injective(r, c, args.p)
             for r in (1, 2, 3) for c in (1, 2, 3))
    return _check_json("trace", args, None, ok), ok


def _check_json(name, args, I, ok, extra=None):
    payload = {
        "schema": REPORT_SCHEMA,
        "check": name,
        "config": {"p": args.p, "M": args.M, "m": args.m,
                   "partition": list(I.parts) if I else None},
        "verdict": "PASS" if ok else "FAIL",
    }
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


_VERIFIERS = {
    "main": _verify_main,
    "corollary": _verify_corollary,
    "clifford": _verify_clifford,
    "orbits": _verify_orbits,
    "casselman": _verify_casselman,
    "iwahori": _verify_iwahori,
    "lattice": _verify_lattice,
    "trace": _verify_trace,
}


def cmd_sweep(args):
    grid = list(FAST_GRID)
    if args.stretch:
        grid += STRETCH_GRID
    if args.grid:
        grid = []
        for item in args.grid.split(";"):
            n, p, M = (int(t) for t in item.split(","))
            grid.append((n, p, M))
    results = []
    all_ok = True
    for n, p, M in grid:
        for t in level_zero_classes(n, p):
            I = t.partition()
            labels = t.cuspidals()
            for m in range(2, M + 1):
                rep = verify_main_theorem(I, labels, m, M, args.budget)
                all_ok = all_ok and rep.passed
                results.append({"n": n, "p": p, "M": M, "m": m,
                                "class": t.describe(), "check": "main",
                                "passed": rep.passed})
            rep = verify_corollary(I, labels, M, args.budget)
            all_ok = all_ok and rep.passed
            results.append({"n": n, "p": p, "M": M, "m": None,
                            "class": t.describe(), "check": "corollary",
                            "passed": rep.passed})
    payload = {
        "schema": REPORT_SCHEMA,
        "grid": [list(g) for g in grid],
        "results": results,
        "verdict": "PASS" if all_ok else "FAIL",
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0 if all_ok else 1


# -- argument plumbing -----------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="levelzero",
        description="Exact verification toolkit for level-zero typicality.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help="max group order to enumerate "
                             "(default: LEVELZERO_BUDGET or 200000)")
        sp.add_argument("-o", "--out", default=None, help="output file")

    sp = sub.add_parser("chartab", help="build a character table")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True,
                    help="ring depth: the group is GL_n(Z/p^m)")
    sp.add_argument("--verify", action="store_true",
                    help="force full orthogonality verification")
    common(sp)
    sp.set_defaults(func=cmd_chartab)

    sp = sub.add_parser("decompose", help="decompose inductions of tau_I")
    sp.add_argument("--I", required=True, help="partition, e.g. 1,1")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--cuspidals", default=None,
                    help="per-part cuspidal table indices, e.g. 0,0")
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("zelevinsky", help="evaluate a ring expression")
    sp.add_argument("expr")
    sp.add_argument("--q", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_zelevinsky)

    sp = sub.add_parser("verify", help="run one named checker")
    sp.add_argument("target", choices=sorted(_VERIFIERS))
    sp.add_argument("--I", default=None, help="partition, e.g. 1,1")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--cuspidals", default=None)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="run the verifiers over a grid")
    sp.add_argument("--grid", default=None,
                    help="semicolon-separated n,p,M triples")
    sp.add_argument("--stretch", action="store_true",
                    help="include the GL_3(Z/4) configurations")
    common(sp)
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
