"""Command line interface: superyang {roots,groupoid,verify-classical,verify-yangian,replay}."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .groupoid import orbit, shortest_path
from .liesuper import (
    DEFAULT_LOOP_WINDOW, check_assignment, classical_reflection, resolve_and_verify,
)
from .presentations import quantum_reflection, resolve_signs
from .rewrite import DEFAULT_DEGREE_BOUND, DEFAULT_LEVEL_BOUND, complete, rules_from, verify_image
from .rootspace import RootSystemError, build_system, cartan_matrix, dynkin

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
COMMANDS = ("roots", "groupoid", "verify-classical", "verify-yangian", "replay")
CONFIG_KEYS = {"word": str, "affine": "bool", "node": int, "degree": int, "level": int,
               "loop_window": int, "out": str, "seed": int, "variant": str}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    word: str | None = None
    affine: bool = False
    node: int | None = None
    degree: int = DEFAULT_DEGREE_BOUND
    level: int = DEFAULT_LEVEL_BOUND
    loop_window: int = DEFAULT_LOOP_WINDOW
    out: str = "json"
    seed: int | None = None
    variant: str = "corrected"

    @property
    def m(self) -> int:
        return self.word.count("0")

    @property
    def n(self) -> int:
        return self.word.count("1")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superyang", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--word", help="parity word, e.g. 00011")
    ap.add_argument("--affine", action="store_true", default=None)
    ap.add_argument("--node", type=int)
    ap.add_argument("--degree", type=int)
    ap.add_argument("--level", type=int)
    ap.add_argument("--loop-window", dest="loop_window", type=int)
    ap.add_argument("--out", choices=("json", "dot", "text"))
    ap.add_argument("--seed", type=int)
    ap.add_argument("--variant", choices=("corrected", "literal"))
    ap.add_argument("--config", help="plain-text key = value file; flags override it")
    ap.add_argument("--orbit", action="store_true", help="groupoid: full orbit graph (default)")
    ap.add_argument("--to", dest="to_word", help="groupoid: shortest reflection word to this parity word")
    ap.add_argument("--view", choices=("parity", "full", "necklace"), default="parity")
    ap.add_argument("--family", action="append", dest="families",
                    help="verify-yangian: restrict to relation families (repeatable)")
    ap.add_argument("--flip", help="fault injection: flip this resolved sign parameter")
    ap.add_argument("--replay", dest="replay_file", help="certificate file for the replay command")
    return ap


def read_config(path: str) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        kind = CONFIG_KEYS[key]
        if kind == "bool":
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise UsageError(f"{path}:{lineno}: {key} must be a boolean")
            out[key] = value.lower() in ("true", "1", "yes")
        else:
            try:
                out[key] = kind(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            values = read_config(args.config)
        except OSError as exc:
            raise UsageError(str(exc)) from None
        for k, v in values.items():
            setattr(cfg, k, v)
    for k in CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    if cfg.degree < 1 or cfg.level < 1 or cfg.loop_window < 1:
        raise UsageError("degree, level and loop window must be positive")
    cap = os.environ.get("SUPERYANG_MAX_DEGREE")
    if cap is not None:
        try:
            if cfg.degree > int(cap):
                raise UsageError(f"--degree {cfg.degree} exceeds SUPERYANG_MAX_DEGREE={cap}")
        except ValueError:
            raise UsageError("SUPERYANG_MAX_DEGREE must be an integer") from None
    if cfg.word is not None and (not cfg.word or set(cfg.word) - {"0", "1"}):
        raise UsageError(f"parity word must be a nonempty string of 0/1, got {cfg.word!r}")
    return cfg


def emit_report(results: list, fmt: str) -> str:
    """Deterministic rendering of a result list."""
    if fmt == "json":
        return json.dumps({"version": 1, "results": results}, separators=(",", ":"))
    if fmt == "text":
        lines = []
        for r in results:
            if isinstance(r, dict) and "text" in r:
                lines.append(r["text"])
            else:
                lines.append(json.dumps(r, sort_keys=True))
        return "\n".join(lines)
    raise UsageError(f"unknown output format {fmt!r}")


def _system(cfg: RunConfig):
    if cfg.word is None:
        raise UsageError("--word is required")
    try:
        return build_system(cfg.word, cfg.affine)
    except RootSystemError as exc:
        raise UsageError(str(exc)) from None


def _nodes(cfg, sys_):
    if cfg.node is None:
        return list(sys_.nodes)
    if cfg.node not in sys_.nodes:
        raise UsageError(f"node {cfg.node} is not a node of {sys_.describe()}")
    return [cfg.node]


def cmd_roots(cfg, args):
    s = _system(cfg)
    if cfg.out == "dot":
        return dynkin(s, "dot"), EXIT_OK
    info = s.to_json()
    info["dynkin"] = dynkin(s, "ascii")
    if cfg.out == "text":
        cm = cartan_matrix(s)
        rows = [" ".join(f"{cm[i, j]:>3}" for j in s.nodes) for i in s.nodes]
        text = "\n".join([s.describe(), info["dynkin"], *rows])
        return emit_report([{"text": text}], "text"), EXIT_OK
    return emit_report([info], "json"), EXIT_OK


def cmd_groupoid(cfg, args):
    s = _system(cfg)
    try:
        if args.to_word:
            target = build_system(args.to_word, cfg.affine)
            path = shortest_path(s, target)
            if cfg.out == "dot":
                raise UsageError("dot output is available for orbit graphs only")
            if cfg.out == "text":
                steps = " -> ".join([path.start.parity_word] + [
                    f"[{i}:{p}] " + w for (_, i), p, w in zip(
                        path.steps, path.parity_trace,
                        [st.parity_word for st, _ in path.steps[1:]] + [path.end.parity_word])])
                return emit_report([{"text": steps}], "text"), EXIT_OK
            return emit_report([path.to_json()], "json"), EXIT_OK
        graph = orbit(s, view=args.view)
    except RootSystemError as exc:
        raise UsageError(str(exc)) from None
    if cfg.out == "dot":
        return graph.to_dot(), EXIT_OK
    if cfg.out == "text":
        text = f"{len(graph.vertices)} vertices, {len(graph.edges)} edges\n" + "\n".join(
            f"{a} --{i}({p})-- {b}" for a, b, i, p in graph.edges)
        return emit_report([{"text": text}], "text"), EXIT_OK
    return emit_report([graph.to_json()], "json"), EXIT_OK


def cmd_verify_classical(cfg, args):
    s = _system(cfg)
    if cfg.out == "dot":
        raise UsageError("dot output is not available for verification reports")
    results, code = [], EXIT_OK
    for i in _nodes(cfg, s):
        assignment, report = resolve_and_verify(classical_reflection(s, i), loop_window=cfg.loop_window)
        if args.flip:
            if args.flip not in assignment.sign_names:
                raise UsageError(f"unknown sign parameter {args.flip!r}; have {list(assignment.sign_names)}")
            assignment = assignment.flip(args.flip)
            report = check_assignment(assignment, loop_window=cfg.loop_window)
        entry = {"node": i, "system": s.parity_word, "affine": s.affine, **report.to_json()}
        if cfg.out == "text":
            fails = [c.id for c in report.failures()]
            entry = {"text": f"node {i}: {report.status}, signs {dict(zip(report.sign_names, report.resolved_signs))}"
                             + (f", failures {fails[:6]}" if fails else "")}
        results.append(entry)
        if not report.ok or report.status != "resolved":
            code = EXIT_FAIL
    return emit_report(results, cfg.out), code


def _yangian_outcomes(cfg, s, i, families, flip=None, rng=None):
    gmap = resolve_signs(quantum_reflection(s, i, cfg.variant), level_bound=cfg.level)
    context = {"word": s.parity_word, "affine": s.affine, "node": i, "variant": cfg.variant, "seed": cfg.seed}
    if gmap.status != "resolved":
        return [{"relation_id": "*", "map_id": gmap.map_id, "status": "inconclusive",
                 "bounds": {"degree": cfg.degree, "level": cfg.level}, "trace": [], "residual": [],
                 "notes": list(gmap.notes), "context": context}]
    if flip:
        if flip not in gmap.sign_names:
            raise UsageError(f"unknown sign parameter {flip!r}; have {list(gmap.sign_names)}")
        gmap = gmap.flip(flip)
    context["signs"] = dict(zip(gmap.sign_names, gmap.signs))
    rs = complete(rules_from(gmap.target, cfg.degree, cfg.level))
    out = []
    for rel in gmap.source.relations:
        if families and rel.family not in families:
            continue
        o = verify_image(gmap, rel, rs, gmap.signs, rng)
        entry = o.to_json()
        entry["context"] = context
        out.append(entry)
    return out


def cmd_verify_yangian(cfg, args):
    s = _system(cfg)
    if cfg.m == cfg.n or min(cfg.m, cfg.n) < 2:
        raise UsageError("verify-yangian needs m != n and m, n >= 2")
    if cfg.out == "dot":
        raise UsageError("dot output is not available for verification reports")
    rng = random.Random(cfg.seed) if cfg.seed is not None else None
    results = []
    for i in _nodes(cfg, s):
        results.extend(_yangian_outcomes(cfg, s, i, args.families, args.flip, rng))
    code = EXIT_OK if all(r["status"] == "verified" for r in results) else EXIT_INCONCLUSIVE
    if cfg.out == "text":
        lines = [{"text": f"{r['map_id']} {r['relation_id']}: {r['status']}"} for r in results]
        return emit_report(lines, "text"), code
    return emit_report(results, "json"), code


def replay_certificate(entry: dict) -> str | None:
    """Recompute one certificate entry; return the first divergence or None.

    Traces depend on rule-application order, so they are compared only for
    certificates produced without a randomized strategy (no seed).
    """
    ctx = entry["context"]
    s = build_system(ctx["word"], ctx["affine"])
    gmap = quantum_reflection(s, ctx["node"], ctx.get("variant", "corrected"))
    if entry["relation_id"] == "*":
        resolved = resolve_signs(gmap, level_bound=entry["bounds"]["level"])
        return None if resolved.status != "resolved" else f"{gmap.map_id}: signs now resolve"
    signs = tuple(ctx["signs"][n] for n in gmap.sign_names)
    gmap = gmap.with_signs(signs)
    bounds = entry["bounds"]
    rs = complete(rules_from(gmap.target, bounds["degree"], bounds["level"]))
    rel = next((r for r in gmap.source.relations if r.id == entry["relation_id"]), None)
    if rel is None:
        return f"relation {entry['relation_id']} not found in {gmap.map_id}"
    fresh = verify_image(gmap, rel, rs).to_json()
    keys = ("status", "residual") if ctx.get("seed") is not None else ("status", "residual", "trace")
    for key in keys:
        if fresh[key] != entry[key]:
            return f"{entry['relation_id']}: {key} differs (certificate {entry[key]!r}, replay {fresh[key]!r})"
    return None


def cmd_replay(cfg, args):
    path = args.replay_file
    if not path:
        raise UsageError("replay needs --replay FILE")
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    if payload.get("version") != 1 or not isinstance(payload.get("results"), list):
        raise UsageError("not a version-1 certificate file")
    results = []
    for entry in payload["results"]:
        try:
            problem = replay_certificate(entry)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed certificate entry: {exc}") from None
        if problem:
            results.append({"relation_id": entry.get("relation_id"), "status": "mismatch", "divergence": problem})
            out = emit_report(results, "json" if cfg.out != "text" else "text")
            return out, EXIT_FAIL
        results.append({"relation_id": entry["relation_id"], "status": "replayed"})
    return emit_report(results, "json" if cfg.out != "text" else "text"), EXIT_OK


HANDLERS = {
    "roots": cmd_roots,
    "groupoid": cmd_groupoid,
    "verify-classical": cmd_verify_classical,
    "verify-yangian": cmd_verify_yangian,
    "replay": cmd_replay,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = build_config(args)
        text, code = HANDLERS[args.command](cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except Exception as exc:  # reported, not hidden
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FAIL
    print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
