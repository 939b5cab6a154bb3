"""Session files: a ring, named objects, and ``run`` commands.

::

    ring q=32003 vars x,y
    ideal I = x^2, x*y
    prime p = {x,y}
    set Phi = {}, {x}, {y}
    module M = quotient I
    module F = free (0,0)
    module E = injective {x,y} shift (0,0)
    module L = locfree {x} shift (0,0)
    complex X = [E -> A + B] from 0 maps (E->A: 1, E->B: 1)
    run coherent Phi

``#`` starts a comment.  Usage: ``speccalc run FILE [--json] [--char q] [--box-pad k]``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .errors import InputError, SoundnessAlarm, SpeccalcError
from .field_linalg import DEFAULT_PRIME
from .graded_modules import (
    GradedModule,
    Presented,
    Region,
    SummandComplex,
    ZeroModule,
    natural_component,
    verify_complex,
)
from .homological_invariants import bass_numbers, betti_vector, depth_at_prime, depth_ideal, find_deep_module
from .monomial_core import Monomial, MonomialIdeal, MonomialPrime, PrimeSet, dimension
from .ring import Ring
from .spec_calculus import check_dimension_theorem, coherence_verdict, default_catalog
from .support_theory import ass_module, supp_module, theorem_main_check

COMMANDS = ("ass", "supp", "bass", "depth", "betti", "dim", "coherent", "witness", "check-main", "check-dim")

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class RingDecl:
    names: tuple[str, ...]
    q: int | None = None


@dataclass(frozen=True)
class Decl:
    kind: str  # ideal | prime | set | module | complex
    name: str
    body: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Command:
    verb: str | None
    args: tuple[str, ...]
    line: int = field(default=0, compare=False)
    error: str | None = field(default=None, compare=False)
    text: str = field(default="", compare=False)


@dataclass
class Session:
    ring: RingDecl | None = None
    decls: list[Decl] = field(default_factory=list)
    commands: list[Command] = field(default_factory=list)

    def names(self) -> dict[str, Decl]:
        return {d.name: d for d in self.decls}


# ---------------------------------------------------------------------------
# parsing


def _err(line: int, msg: str) -> InputError:
    return InputError(f"line {line}: {msg}")


def _split_list(text: str) -> list[str]:
    """Split on commas that are not inside braces or parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


def _parse_vars(text: str, line: int) -> tuple[str, ...]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise _err(line, f"expected a variable set like {{x,y}}, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    names = tuple(v.strip() for v in inner.split(","))
    for v in names:
        if not re.fullmatch(_NAME, v):
            raise _err(line, f"bad variable name {v!r}")
    if len(set(names)) != len(names):
        raise _err(line, "repeated variable in a set")
    return names


def _parse_degree(text: str, line: int) -> tuple[int, ...]:
    m = re.fullmatch(r"\s*[(\[]\s*(.*?)\s*[)\]]\s*", text)
    if not m:
        raise _err(line, f"expected a degree like (0,0), got {text!r}")
    try:
        return tuple(int(x) for x in m.group(1).split(",")) if m.group(1) else ()
    except ValueError:
        raise _err(line, f"bad degree {text!r}") from None


def _parse_monomial(text: str, line: int) -> tuple[tuple[str, int], ...]:
    text = text.strip()
    if text == "1":
        return ()
    out = []
    for factor in text.split("*"):
        m = re.fullmatch(rf"\s*({_NAME})\s*(?:\^\s*(\d+))?\s*", factor)
        if not m:
            raise _err(line, f"bad monomial factor {factor!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
    return tuple(out)


def _parse_term_list(text: str, line: int) -> tuple[tuple[str, ...], ...]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise _err(line, "complex terms must be written as [A -> B + C]")
    terms = []
    for part in text[1:-1].split("->"):
        summands = tuple(s.strip() for s in part.split("+"))
        if summands == ("0",):
            summands = ()
        for s in summands:
            if not re.fullmatch(_NAME, s):
                raise _err(line, f"bad summand name {s!r}")
        terms.append(summands)
    return tuple(terms)


def _parse_decl(kind: str, name: str, rhs: str, line: int) -> Decl:
    rhs = rhs.strip()
    if kind == "ideal":
        if rhs == "0":
            return Decl(kind, name, (), line)
        return Decl(kind, name, tuple(_parse_monomial(g, line) for g in _split_list(rhs)), line)
    if kind == "prime":
        return Decl(kind, name, (_parse_vars(rhs, line),), line)
    if kind == "set":
        items = _split_list(rhs) if rhs else []
        return Decl(kind, name, tuple(_parse_vars(s, line) for s in items), line)
    if kind == "module":
        m = re.fullmatch(rf"quotient\s+({_NAME})(?:\s+shift\s+(.+))?", rhs)
        if m:
            shift = _parse_degree(m.group(2), line) if m.group(2) else None
            return Decl(kind, name, ("quotient", m.group(1), shift), line)
        m = re.fullmatch(r"free(?:\s+(.+))?", rhs)
        if m:
            return Decl(kind, name, ("free", _parse_degree(m.group(1), line) if m.group(1) else None), line)
        m = re.fullmatch(r"(injective|locfree)\s+(\{[^}]*\})(?:\s+shift\s+(.+))?", rhs)
        if m:
            shift = _parse_degree(m.group(3), line) if m.group(3) else None
            return Decl(kind, name, (m.group(1), _parse_vars(m.group(2), line), shift), line)
        raise _err(line, f"unknown module form {rhs!r}")
    if kind == "complex":
        m = re.fullmatch(r"(\[.*?\])(?:\s+from\s+(-?\d+))?(?:\s+maps\s*\((.*)\))?", rhs)
        if not m:
            raise _err(line, "complex must read [A -> B + C] [from i] [maps (A->B: c, ...)]")
        terms = _parse_term_list(m.group(1), line)
        start = int(m.group(2)) if m.group(2) else 0
        maps = []
        if m.group(3) and m.group(3).strip():
            for item in _split_list(m.group(3)):
                mm = re.fullmatch(rf"\s*({_NAME})\s*->\s*({_NAME})\s*:\s*(-?\d+)\s*", item)
                if not mm:
                    raise _err(line, f"bad component {item!r}")
                maps.append((mm.group(1), mm.group(2), int(mm.group(3))))
        return Decl(kind, name, (terms, start, tuple(maps)), line)
    raise _err(line, f"unknown declaration {kind!r}")


def _parse_command(rest: str, line: int, raw: str) -> Command:
    words = rest.split(None, 1)
    if not words:
        return Command(None, (), line, "empty run command", raw)
    verb = words[0]
    args_text = words[1] if len(words) > 1 else ""
    if verb not in COMMANDS:
        return Command(None, (), line, f"unknown command {verb!r}", raw)
    # an inline prime such as {x,y} counts as one argument
    args = tuple(re.findall(r"\{[^}]*\}|[^\s]+", args_text))
    arity = {"ass": (1,), "supp": (1,), "bass": (2,), "depth": (2,), "betti": (1,), "dim": (1,),
             "coherent": (1,), "witness": (0,), "check-main": (2,), "check-dim": (0, 1)}[verb]
    if len(args) not in arity:
        return Command(None, (), line, f"{verb} takes {' or '.join(map(str, arity))} argument(s)", raw)
    return Command(verb, args, line, None, raw)


def _check_decl(decl: Decl, names: Sequence[str], kinds: dict[str, str]) -> None:
    """Ring mismatches and unknown names, caught at the declaring line."""
    n, line = len(names), decl.line

    def var(v):
        if v not in names:
            raise _err(line, f"variable {v!r} is not in the ring")

    def degree(d):
        if d is not None and len(d) != n:
            raise _err(line, f"degree {d} does not have {n} entries")

    def ref(name, kind):
        if kinds.get(name) != kind:
            raise _err(line, f"unknown {kind} {name!r}")

    if decl.kind == "ideal":
        for mono in decl.body:
            for v, _ in mono:
                var(v)
    elif decl.kind in ("prime", "set"):
        for vs in decl.body:
            for v in vs:
                var(v)
    elif decl.kind == "module":
        form = decl.body[0]
        if form == "quotient":
            ref(decl.body[1], "ideal")
            degree(decl.body[2])
        elif form == "free":
            degree(decl.body[1])
        else:
            for v in decl.body[1]:
                var(v)
            degree(decl.body[2])
    elif decl.kind == "complex":
        terms, _, maps = decl.body
        for t in terms:
            for summand in t:
                ref(summand, "module")
        for a, b, _ in maps:
            ref(a, "module")
            ref(b, "module")


def parse(text: str) -> Session:
    """Parse a session.  Declaration errors abort; malformed ``run`` lines are
    kept as failing commands so that the rest of the session still runs."""
    s = Session()
    seen: set[str] = set()
    kinds: dict[str, str] = {}
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "ring":
            if s.ring is not None:
                raise _err(k, "ring declared twice")
            m = re.fullmatch(r"(?:q\s*=\s*(\d+)\s+)?vars\s+(.+)", rest)
            if not m:
                raise _err(k, "ring must read: ring [q=P] vars x,y")
            names = tuple(v.strip() for v in m.group(2).split(","))
            for v in names:
                if not re.fullmatch(_NAME, v):
                    raise _err(k, f"bad variable name {v!r}")
            s.ring = RingDecl(names, int(m.group(1)) if m.group(1) else None)
        elif head in ("ideal", "prime", "set", "module", "complex"):
            if s.ring is None:
                raise _err(k, "declare the ring first")
            m = re.fullmatch(rf"({_NAME})\s*=\s*(.*)", rest)
            if not m:
                raise _err(k, f"{head} must read: {head} NAME = ...")
            name = m.group(1)
            if name in seen:
                raise _err(k, f"name {name!r} declared twice")
            decl = _parse_decl(head, name, m.group(2), k)
            _check_decl(decl, s.ring.names, kinds)
            seen.add(name)
            kinds[name] = head
            s.decls.append(decl)
        elif head == "run":
            s.commands.append(_parse_command(rest, k, line))
        else:
            raise _err(k, f"unknown statement {head!r}")
    if s.decls and s.ring is None:
        raise InputError("no ring declared")
    return s


# ---------------------------------------------------------------------------
# printing (canonical form)


def _fmt_vars(vs: Sequence[str]) -> str:
    return "{" + ",".join(vs) + "}"


def _fmt_degree(d: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in d) + ")"


def _fmt_monomial(factors) -> str:
    if not factors:
        return "1"
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in factors)


def format_session(s: Session) -> str:
    lines = []
    if s.ring is not None:
        q = f"q={s.ring.q} " if s.ring.q is not None else ""
        lines.append(f"ring {q}vars {','.join(s.ring.names)}")
    for d in s.decls:
        if d.kind == "ideal":
            body = ", ".join(_fmt_monomial(g) for g in d.body) if d.body else "0"
        elif d.kind == "prime":
            body = _fmt_vars(d.body[0])
        elif d.kind == "set":
            body = ", ".join(_fmt_vars(v) for v in d.body)
        elif d.kind == "module":
            form = d.body[0]
            if form == "quotient":
                body = f"quotient {d.body[1]}" + (f" shift {_fmt_degree(d.body[2])}" if d.body[2] else "")
            elif form == "free":
                body = "free" + (f" {_fmt_degree(d.body[1])}" if d.body[1] is not None else "")
            else:
                body = f"{form} {_fmt_vars(d.body[1])}" + (
                    f" shift {_fmt_degree(d.body[2])}" if d.body[2] is not None else "")
        else:
            terms, start, maps = d.body
            t = " -> ".join(" + ".join(ts) if ts else "0" for ts in terms)
            body = f"[{t}] from {start}"
            if maps:
                body += " maps (" + ", ".join(f"{a}->{b}: {c}" for a, b, c in maps) + ")"
        lines.append(f"{d.kind} {d.name} = {body}")
    for c in s.commands:
        if c.verb is None:
            lines.append(c.text)
        else:
            lines.append(" ".join(("run", c.verb) + c.args))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# building objects


class _Env:
    def __init__(self, session: Session, ring: Ring):
        self.session = session
        self.ring = ring
        self.decls = session.names()
        self.built: dict[str, object] = {}

    def _mask(self, names: Sequence[str], line: int) -> int:
        mask = 0
        for v in names:
            if v not in self.ring.names:
                raise _err(line, f"unknown variable {v!r}")
            mask |= 1 << self.ring.index(v)
        return mask

    def _degree(self, d, line: int) -> tuple[int, ...]:
        if d is None:
            return (0,) * self.ring.n
        if len(d) != self.ring.n:
            raise _err(line, f"degree {d} needs {self.ring.n} entries")
        return d

    def get(self, name: str, kind: str | None = None, line: int = 0):
        if kind == "prime" and name.startswith("{"):
            return MonomialPrime(self.ring.n, self._mask(_parse_vars(name, line), line))
        if name not in self.decls:
            raise _err(line, f"unknown name {name!r}")
        d = self.decls[name]
        if kind is not None and d.kind != kind:
            raise _err(line, f"{name!r} is a {d.kind}, not a {kind}")
        if name not in self.built:
            self.built[name] = self._build(d)
        return self.built[name]

    def _build(self, d: Decl):
        n = self.ring.n
        line = d.line
        if d.kind == "ideal":
            gens = []
            for factors in d.body:
                e = [0] * n
                for v, p in factors:
                    if v not in self.ring.names:
                        raise _err(line, f"unknown variable {v!r}")
                    e[self.ring.index(v)] += p
                gens.append(Monomial(tuple(e)))
            return MonomialIdeal(n, tuple(gens))
        if d.kind == "prime":
            return MonomialPrime(n, self._mask(d.body[0], line))
        if d.kind == "set":
            return PrimeSet(n, frozenset(self._mask(v, line) for v in d.body))
        if d.kind == "module":
            form = d.body[0]
            if form == "quotient":
                ideal = self.get(d.body[1], "ideal", line)
                return Presented.quotient(self.ring, ideal, self._degree(d.body[2], line), label=d.name)
            if form == "free":
                return Presented.free(self.ring, [self._degree(d.body[1], line)], label=d.name)
            mask = self._mask(d.body[1], line)
            shift = self._degree(d.body[2], line)
            if form == "injective":
                return Region.injective(self.ring, mask, shift, label=d.name)
            return Region.localized_free(self.ring, mask, shift, label=d.name)
        return self._build_complex(d)

    def _build_complex(self, d: Decl):
        terms_names, start, maps = d.body
        terms = {}
        for k, names in enumerate(terms_names):
            terms[start + k] = tuple(self.get(nm, "module", d.line) for nm in names)
        comps: dict[int, dict] = {}
        for a, b, c in maps:
            spots = [(i, s, t) for i in terms if i + 1 in terms
                     for s, nm in enumerate(terms_names[i - start]) if nm == a
                     for t, nm2 in enumerate(terms_names[i + 1 - start]) if nm2 == b]
            if len(spots) != 1:
                raise _err(d.line, f"component {a}->{b} matches {len(spots)} places in the complex")
            i, s, t = spots[0]
            src, tgt = terms[i][s], terms[i + 1][t]
            comps.setdefault(i, {})[(t, s)] = natural_component(src, tgt, c)
        X = SummandComplex(self.ring, terms, comps, d.name, {i: terms_names[i - start] for i in terms})
        verify_complex(X)
        return X

    def catalog(self) -> list[GradedModule]:
        out = default_catalog(self.ring)
        for d in self.session.decls:
            if d.kind == "module":
                m = self.get(d.name, "module", d.line)
                if not isinstance(m, ZeroModule):
                    out.append(m)
        return out


# ---------------------------------------------------------------------------
# running


def _fmt_set(p: PrimeSet, names) -> str:
    return p.format(names) if len(p) else "(empty)"


def _depth_value(v) -> int | str:
    return "inf" if v == math.inf else int(v)


def _execute(env: _Env, cmd: Command) -> tuple[str, dict]:
    ring = env.ring
    names = ring.names
    a = cmd.args
    line = cmd.line
    if cmd.verb == "ass":
        M = env.get(a[0], "module", line)
        s = ass_module(M)
        return f"Ass({a[0]}) = {_fmt_set(s, names)}", {"module": a[0], "primes": s.labels(names)}
    if cmd.verb == "supp":
        M = env.get(a[0], "module", line)
        s = supp_module(M).value
        return f"Supp({a[0]}) = {_fmt_set(s, names)}", {"module": a[0], "primes": s.labels(names)}
    if cmd.verb == "bass":
        M = env.get(a[0], "module", line)
        p = env.get(a[1], "prime", line)
        mu = bass_numbers(M, p)
        return f"mu = [{','.join(map(str, mu))}]", {"module": a[0], "prime": p.label(names), "mu": mu}
    if cmd.verb == "depth":
        M = env.get(a[0], "module", line)
        target = a[1]
        if not target.startswith("{") and env.decls.get(target) and env.decls[target].kind == "ideal":
            v = depth_ideal(env.get(target, "ideal", line), M).value
            return f"depth = {_depth_value(v)}", {"module": a[0], "ideal": target, "depth": _depth_value(v)}
        p = env.get(target, "prime", line)
        v = depth_at_prime(M, p)
        return f"depth = {v}", {"module": a[0], "prime": p.label(names), "depth": v}
    if cmd.verb == "betti":
        M = env.get(a[0], "module", line)
        if not isinstance(M, Presented):
            raise _err(line, "betti needs a finitely presented module")
        b = betti_vector(M)
        return f"betti = [{','.join(map(str, b))}]", {"module": a[0], "betti": b}
    if cmd.verb == "dim":
        I = env.get(a[0], "ideal", line)
        v = dimension(I)
        return f"dim = {v}", {"ideal": a[0], "dim": v}
    if cmd.verb == "coherent":
        phi = env.get(a[0], "set", line)
        v = coherence_verdict(phi, env.catalog())
        return v.format(names), {"set": a[0], **v.to_json(names)}
    if cmd.verb == "witness":
        if ring.n < 2:
            return "no witness (needs at least two variables)", {"found": False}
        hit = find_deep_module(ring.n, env.catalog())
        if hit is None:
            return "no witness in catalog", {"found": False}
        M, p, d = hit
        return (f"witness: M={M.describe()}, p={p.format(names)}, d={d}",
                {"found": True, "module": M.describe(), "prime": p.label(names), "d": d})
    if cmd.verb == "check-main":
        phi = env.get(a[0], "set", line)
        X = env.get(a[1], "complex", line)
        v = coherence_verdict(phi, env.catalog())
        rep = theorem_main_check(phi, X, v)
        text = (f"Supp X = {_fmt_set(rep.supp_x, names)}; Supp H*X = {_fmt_set(rep.supp_h, names)}; "
                f"relation = {rep.relation}")
        return text, {"set": a[0], "complex": a[1], "verdict": v.status.value, **rep.to_json(names)}
    if cmd.verb == "check-dim":
        I = env.get(a[0], "ideal", line) if a else None
        rep = check_dimension_theorem(ring, I, env.catalog() if I is None or I.is_zero() else None)
        payload = {"dim": rep.dim, "verified": rep.verified}
        if rep.dim <= 1:
            payload["subsets"] = rep.checked
        elif rep.noncoherent is not None:
            payload["noncoherent"] = rep.noncoherent.to_json(names)
        return rep.format(names), payload
    raise _err(line, f"unknown command {cmd.verb!r}")


def run(session: Session, as_json: bool = False, q: int | None = None, pad: int | None = None,
        out=None, err=None) -> int:
    """Execute every command in order.  Returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    if not session.commands:
        return 0
    if session.ring is None:
        print("error: no ring declared", file=err)
        return 1
    env_q = os.environ.get("SPECCALC_CHAR")
    try:
        char = q if q is not None else (int(env_q) if env_q else (session.ring.q or DEFAULT_PRIME))
        ring = Ring(session.ring.names, char, pad if pad is not None else 1)
    except (ValueError, SpeccalcError) as e:
        print(f"error: {e}", file=err)
        return 1
    env = _Env(session, ring)
    code = 0
    for k, cmd in enumerate(session.commands, start=1):
        try:
            if cmd.error is not None:
                raise _err(cmd.line, cmd.error)
            text, payload = _execute(env, cmd)
        except SoundnessAlarm as e:
            code = 2
            _report(out, err, as_json, k, cmd, f"soundness alarm: {e}")
            continue
        except SpeccalcError as e:
            code = max(code, 1)
            _report(out, err, as_json, k, cmd, str(e))
            continue
        if as_json:
            print(json.dumps({"index": k, "command": cmd.verb, **payload}), file=out)
        else:
            print(text, file=out)
    return code


def _report(out, err, as_json, k, cmd, msg):
    print(f"error in command {k}: {msg}", file=err)
    if as_json:
        print(json.dumps({"index": k, "command": cmd.verb, "error": msg}), file=out)


def output_schema() -> dict:
    text = resources.files("speccalc").joinpath("output.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="speccalc", description="Coherence and support calculator")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a session file")
    r.add_argument("file")
    r.add_argument("--json", action="store_true", help="one JSON object per command")
    r.add_argument("--char", type=int, default=None, help="prime characteristic")
    r.add_argument("--box-pad", type=int, default=None, help="degree box padding (>= 1)")
    args = ap.parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            session = parse(fh.read())
        if args.char is not None or args.box_pad is not None:
            Ring(("x",), args.char or DEFAULT_PRIME, args.box_pad or 1)
    except (OSError, SpeccalcError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return run(session, args.json, args.char, args.box_pad)


if __name__ == "__main__":
    sys.exit(main())
