"""Command-line interface: ``python -m orhier <command> ...``.

Every command prints a short human rendering, or with ``--json`` a
schema-tagged JSON document.  Exit status is 0 on success, 2 when a
verdict is ``Unknown`` or a search ran out of budget, and 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import shlex
import sys
import time
from pathlib import Path

from .brown import brown_criterion, hyperplane_splitting, trace
from .complex import Presentation
from .covers import CoverError, CyclicCoverSpec, minimal_tree_domain, primitive_z2, splitting_from_domain
from .freegroup import Alphabet, WordSyntaxError, cyclic_reduce, is_primitive, parse_letters, primitivity_rank
from .gocs import DEFAULT_BUDGET, BsVerdict, BudgetExceeded, GocsError, bs_detect, build_gocs
from .hierarchy import build_tower, hierarchy_length
from .stability import StabilityError, family_in_vertex_letters, stable_number

SCHEMA_VERSION = 1
BUDGET_ENV = "ORHIER_BUDGET"

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class Outcome:
    """What a command produced: the JSON payload, the human text and the exit status."""

    def __init__(self, command, payload, text, status=EXIT_OK, summary=None):
        self.command = command
        self.payload = payload
        self.text = text
        self.status = status
        self.summary = summary if summary is not None else text

    def document(self):
        return {"schema": f"orhier/{self.command}", "version": SCHEMA_VERSION, **self.payload}

    def render_json(self):
        return json.dumps(self.document(), sort_keys=True, indent=2)


def global_budget(default):
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else default


def _presentation(text):
    p = Presentation.parse(text)
    if p.reduced:
        print(f"note: relator reduced to {p.alphabet.format(p.relator) or '1'}", file=sys.stderr)
    return p


def _word_arg(text, names=None):
    """A bare word, or a presentation whose relator is taken."""
    if "|" in text or text.strip().startswith("gens"):
        p = _presentation(text)
        return p.alphabet, p.relator
    letters = names or sorted({ch.lower() for ch in text if ch.isalpha()})
    alphabet = Alphabet(tuple(letters))
    word, _ = cyclic_reduce(parse_letters(text, alphabet))
    return alphabet, tuple(word)


def _write_dot(stem, suffix, text):
    path = Path(f"{stem}{suffix}.dot")
    path.write_text(text + "\n")
    return str(path)


def _splitting_for(p: Presentation, phi):
    X = p.complex()
    if phi:
        spec = CyclicCoverSpec.parse(X, phi)
        return splitting_from_domain(minimal_tree_domain(spec)), spec.generator_values()
    tower = build_tower(X)
    if not tower.levels:
        raise CoverError("relator is a primitive power; there is no splitting")
    return tower.levels[0].splitting, tower.levels[0].phi


def _splitting_payload(split):
    return {
        "vertex_generators": list(split.names),
        "vertex_relator": split.format(split.relator),
        "A": [split.format(w) for w in split.a_basis],
        "B": [split.format(w) for w in split.b_basis],
    }


# Commands


def cmd_hlen(args):
    p = _presentation(args.presentation)
    h = hierarchy_length(p.complex())
    return Outcome("hlen", {"presentation": p.format(), "hierarchy_length": h}, str(h))


def cmd_hierarchy(args):
    p = _presentation(args.presentation)
    tower = build_tower(p.complex(), args.strategy)
    levels, lines, dots = [], [], []
    for i, level in enumerate(tower.levels):
        split = level.splitting
        info = {"level": i, "phi": list(level.phi), **_splitting_payload(split)}
        levels.append(info)
        lines.append(
            f"level {i}: phi={list(level.phi)} vertex relator {info['vertex_relator'] or '1'} "
            f"A=<{', '.join(info['A'])}> B=<{', '.join(info['B'])}>"
        )
        if args.dot:
            dots.append(_write_dot(args.dot, f"-level{i}", level.domain.to_dot(f"level{i}")))
    lines.append(f"length {len(tower)}")
    payload = {"presentation": p.format(), "length": len(tower), "levels": levels}
    if dots:
        payload["dot"] = dots
    return Outcome("hierarchy", payload, "\n".join(lines), summary=str(len(tower)))


def cmd_tree_domain(args):
    p = _presentation(args.presentation)
    spec = CyclicCoverSpec.parse(p.complex(), args.phi)
    domain = minimal_tree_domain(spec).normalized()
    split = splitting_from_domain(domain)
    payload = {
        "presentation": p.format(),
        "phi": list(spec.generator_values()),
        "levels": domain.levels(),
        "vertices": sorted([list(v) for v in domain.vertices]),
        "edges": sorted([list(e) for e in domain.edges]),
        "cells": sorted(domain.cells),
        **_splitting_payload(split),
    }
    if args.dot:
        payload["dot"] = _write_dot(args.dot, "", domain.to_dot())
    lo, hi = domain.levels()[0], domain.levels()[-1]
    text = (
        f"levels {lo}..{hi}, {len(domain.vertices)} vertices, {len(domain.edges)} edges, "
        f"{len(domain.cells)} cells\nvertex relator {payload['vertex_relator'] or '1'}"
    )
    return Outcome("tree-domain", payload, text, summary=f"{lo}..{hi}")


def cmd_brown(args):
    alphabet, word = _word_arg(args.word)
    if alphabet.rank == 2:
        result = brown_criterion(word)
        lines = [
            {"normal": list(l.normal), "offset": str(l.offset), "side": l.side, "touching": [list(t) for t in l.touching]}
            for l in result.lines
        ]
        classification = result.classification.value
    else:
        lines, classification = [], None
    hp = hyperplane_splitting(word, alphabet.rank)
    payload = {
        "word": alphabet.format(word),
        "classification": classification,
        "lines": lines,
        "hyperplane_phi": list(hp.phi) if hp else None,
        "free_face": list(hp.free_face) if hp else None,
    }
    if args.dot:
        payload["dot"] = _write_dot(args.dot, "", trace(word, alphabet.rank).to_dot())
    text = [f"classification {classification}"] if classification else []
    text += [f"line {l['side']} normal {l['normal']} touching {l['touching']}" for l in lines]
    text.append(f"hyperplane phi {payload['hyperplane_phi']}" if hp else "no qualifying hyperplane")
    return Outcome("brown", payload, "\n".join(text), summary=classification or str(payload["hyperplane_phi"]))


def cmd_stable(args):
    p = _presentation(args.presentation)
    split, phi = _splitting_for(p, args.phi)
    report = stable_number(split, args.cap)
    families = [[[split.format(w) for w in gens] for gens in family_in_vertex_letters(split, fam)] for fam in report.families]
    s = report.stable_number
    payload = {
        "presentation": p.format(),
        "phi": list(phi),
        **_splitting_payload(split),
        "families": families,
        "stable_number": s,
        "cap": report.cap,
        "limit": report.limit,
    }
    lines = [f"A{i}: " + (" ".join("<" + ", ".join(g) + ">" for g in fam) or "empty") for i, fam in enumerate(families)]
    if s is not None:
        lines.append(f"s = {s}")
    elif report.limit == "depth":
        lines.append(f"EXCEEDED cap {report.cap}")
    else:
        lines.append("EXCEEDED size budget")
    return Outcome("stable", payload, "\n".join(lines), EXIT_OK if s is not None else EXIT_UNKNOWN, str(s) if s is not None else "EXCEEDED")


def cmd_gocs(args):
    p = _presentation(args.presentation)
    split, phi = _splitting_for(p, args.phi)
    report = stable_number(split, args.cap)
    if report.exceeded:
        payload = {"presentation": p.format(), "phi": list(phi), "error": "splitting not known to be stable"}
        return Outcome("gocs", payload, "EXCEEDED: splitting not known to be stable", EXIT_UNKNOWN, "EXCEEDED")
    try:
        graph = build_gocs(split, report, global_budget(args.budget))
    except BudgetExceeded as exc:
        payload = {"presentation": p.format(), "phi": list(phi), "error": str(exc)}
        return Outcome("gocs", payload, f"EXCEEDED: {exc}", EXIT_UNKNOWN, "EXCEEDED")
    dot = graph.to_dot()
    payload = {
        "presentation": p.format(),
        "phi": list(phi),
        "vertices": [{"side": v.side, "label": graph.label(i)} for i, v in enumerate(graph.vertices)],
        "edges": [
            {"kind": e.kind, "origin": e.origin, "target": e.target, "multipliers": list(e.multipliers)} for e in graph.edges
        ],
        "dot_source": dot,
    }
    if args.dot:
        payload["dot"] = _write_dot(args.dot, "", dot)
    return Outcome("gocs", payload, dot, summary=f"{len(graph.vertices)} vertices, {len(graph.edges)} edges")


def cmd_bs_detect(args):
    p = _presentation(args.presentation)
    verdict = bs_detect(p.complex(), args.cap, global_budget(args.budget), args.enumerate_budget)
    fmt = p.alphabet.format
    payload = {"presentation": p.format(), "verdict": verdict.result, "reason": verdict.reason}
    lines = [verdict.result, verdict.reason]
    w = verdict.witness
    if w is not None:
        m, n = w.parameters
        payload["witness"] = {"a": fmt(w.a), "g": fmt(w.g), "parameters": [m, n], "level": w.level, "walk": w.walk, "z2": w.z2}
        lines.append(f"parameters ({m},{n})")
        lines.append(f"a = {fmt(w.a)}, g = {fmt(w.g)}: g^-1 a^{m} g = a^{n}")
    status = EXIT_UNKNOWN if verdict.result == BsVerdict.UNKNOWN else EXIT_OK
    summary = verdict.result if w is None else f"{verdict.result} ({w.parameters[0]},{w.parameters[1]})"
    return Outcome("bs-detect", payload, "\n".join(lines), status, summary)


def cmd_primrank(args):
    alphabet, word = _word_arg(args.word)
    try:
        value = primitivity_rank(word, global_budget(args.budget))
    except ValueError as exc:
        return Outcome("primrank", {"word": alphabet.format(word), "error": str(exc)}, str(exc), EXIT_UNKNOWN, "BUDGET")
    shown = "inf" if value == math.inf else str(value)
    return Outcome("primrank", {"word": alphabet.format(word), "primitivity_rank": shown}, shown)


def cmd_prim_z2(args):
    word = primitive_z2(args.p, args.q)
    text = Alphabet.standard(2).format(word)
    payload = {"p": args.p, "q": args.q, "word": text, "primitive": is_primitive(word, 2)}
    return Outcome("prim-z2", payload, text)


def _corpus_line(line):
    """``<command> <arguments> [=> expected]``.

    Arguments are shell-split when they start with a quote (so options can
    follow); otherwise the rest of the line is one argument, except for
    ``prim-z2`` which takes two integers.
    """
    body, _, expected = line.partition("=>")
    command, _, rest = body.strip().partition(" ")
    rest = rest.strip()
    if rest[:1] in "\"'" and rest:
        args = shlex.split(rest)
    elif command == "prim-z2":
        args = rest.split()
    else:
        args = [rest] if rest else []
    return [command] + args, expected.strip() or None


def cmd_corpus(args):
    rows, matched, checked = [], 0, 0
    for number, raw in enumerate(Path(args.file).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        argv, expected = _corpus_line(line)
        start = time.perf_counter()
        try:
            out = dispatch(build_parser().parse_args(argv))
            got, status = out.summary, out.status
        except (ValueError, SystemExit) as exc:
            got, status = f"error: {exc}", EXIT_INPUT
        row = {"line": number, "command": argv[0], "input": " ".join(argv[1:]), "result": got, "status": status}
        if not args.no_timing:
            row["seconds"] = round(time.perf_counter() - start, 3)
        if expected is not None:
            row["expected"] = expected
            row["match"] = got == expected
            checked += 1
            matched += got == expected
        rows.append(row)
    payload = {"rows": rows, "checked": checked, "matched": matched}
    text = [f"{r['line']:>4} {r['command']:<12} {r['result']}" + ("" if "match" not in r else ("  ok" if r["match"] else f"  MISMATCH (expected {r['expected']})")) for r in rows]
    text.append(f"{matched}/{checked} matching")
    status = EXIT_OK if matched == checked else EXIT_UNKNOWN
    return Outcome("corpus", payload, "\n".join(text), status, f"{matched}/{checked}")


def build_parser():
    parser = argparse.ArgumentParser(prog="orhier", description="One-relator hierarchies, stability and Baumslag-Solitar detection.")
    parser.add_argument("--json", action="store_true", help="emit schema-tagged JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, presentation=True):
        p = sub.add_parser(name, help=help_text)
        if presentation:
            p.add_argument("presentation", help='"a b | word" or "gens: a b ; relator: word"')
        p.set_defaults(func=func)
        return p

    add("hlen", cmd_hlen, "hierarchy length")
    p = add("hierarchy", cmd_hierarchy, "maximal one-relator tower")
    p.add_argument("--strategy", choices=("minimal-h", "first-found"), default="minimal-h")
    p.add_argument("--dot", metavar="STEM")
    p = add("tree-domain", cmd_tree_domain, "minimal tree domain for an epimorphism to Z")
    p.add_argument("--phi", required=True, help='"a=5 b=3" or "exp(t)"')
    p.add_argument("--dot", metavar="STEM")
    p = add("brown", cmd_brown, "supporting lines of the trace", presentation=False)
    p.add_argument("word")
    p.add_argument("--dot", metavar="STEM")
    for name, func in (("stable", cmd_stable), ("gocs", cmd_gocs)):
        p = add(name, func, "stable number" if name == "stable" else "graph of cyclic stabilisers (DOT)")
        p.add_argument("--phi", help="epimorphism to Z; default is the first tower level")
        p.add_argument("--cap", type=int)
        if name == "gocs":
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
            p.add_argument("--dot", metavar="STEM")
    p = add("bs-detect", cmd_bs_detect, "Baumslag-Solitar subgroup detection")
    p.add_argument("--cap", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--enumerate-budget", type=int, default=0)
    p = add("primrank", cmd_primrank, "primitivity rank", presentation=False)
    p.add_argument("word")
    p.add_argument("--budget", type=int, default=16)
    p = add("prim-z2", cmd_prim_z2, "primitive word with given abelianisation", presentation=False)
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p = add("corpus", cmd_corpus, "run a file of commands with expected results", presentation=False)
    p.add_argument("file")
    p.add_argument("--no-timing", action="store_true")
    return parser


def dispatch(args) -> Outcome:
    return args.func(args)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        out = dispatch(args)
    except (WordSyntaxError, CoverError, StabilityError, GocsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(out.render_json() if args.json else out.text)
    return out.status
