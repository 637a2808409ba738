"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from tiltforge import dot, serialize
from tiltforge.cluster import (
    ClusterModel,
    Realization,
    from_distribution,
    projective_object,
    realize_quiver,
    to_distribution,
)
from tiltforge.errors import MalformedInputError, TiltforgeError
from tiltforge.oracle import oracle_report
from tiltforge.quiver import Quiver, dynkin_type, mutate_along, standard_dynkin_quiver
from tiltforge.slices import Setting, parse_arrow_list
from tiltforge.tilt import maximal_tilted_subalgebras


@dataclass(frozen=True)
class RunConfig:
    command: str
    quiver: str | None
    dynkin: str | None
    orientation: str
    distribution: str | None
    fmt: str
    out_dir: str | None
    verbose: bool


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc


def _input_quiver(cfg: RunConfig) -> Quiver:
    if cfg.quiver:
        return Quiver.load(cfg.quiver)
    if cfg.dynkin:
        return standard_dynkin_quiver(cfg.dynkin, cfg.orientation)
    raise MalformedInputError("this command needs --quiver or --dynkin")


def _setting(cfg: RunConfig) -> Setting:
    if cfg.distribution:
        return Setting.from_realization(from_distribution(_read_json(cfg.distribution)))
    q = _input_quiver(cfg)
    if cfg.dynkin or (q.is_acyclic() and dynkin_type(q) is not None):
        m = ClusterModel(q)
        return Setting(m, projective_object(m), q)
    return Setting.from_realization(realize_quiver(q))


def _emit(cfg: RunConfig, payload: dict | None, dots: dict[str, str]) -> None:
    """JSON to stdout; DOT documents to --out-dir, or to stdout when none is given."""
    if cfg.fmt in ("json", "both") and payload is not None:
        sys.stdout.write(serialize.dumps(payload))
    if cfg.fmt in ("dot", "both"):
        if cfg.out_dir:
            os.makedirs(cfg.out_dir, exist_ok=True)
            for name in sorted(dots):
                with open(os.path.join(cfg.out_dir, name), "w", encoding="utf-8") as fh:
                    fh.write(dots[name])
        elif cfg.fmt == "both":
            raise MalformedInputError("--format both needs --out-dir")
        else:
            sys.stdout.write("\n".join(dots[k] for k in sorted(dots)))


def _summand_labels(st: Setting) -> dict:
    return {v: f"T{a}" for a, v in st.ct.items}


# -- subcommands ------------------------------------------------------------------


def cmd_build_ar(cfg: RunConfig, args) -> int:
    if cfg.distribution:
        st = _setting(cfg)
        m, labels, holes = st.model, _summand_labels(st), st.tau_t
    else:
        q = _input_quiver(cfg)
        m, labels, holes = ClusterModel(q), {}, frozenset()
    payload = {
        "type": m.dynkin,
        "vertices": serialize.slice_to_json(m.vertices, key=m.key),
        "arrows": [[dot.vertex_name(u), dot.vertex_name(w)] for u, w in m.arrows()],
        "tau": {dot.vertex_name(v): dot.vertex_name(m.tau(v)) for v in m.vertices},
    }
    _emit(cfg, payload, {"ar_quiver.dot": dot.ar_quiver_dot(m, tau_t=holes, summands=labels)})
    return 0


def cmd_mutate(cfg: RunConfig, args) -> int:
    q = _input_quiver(cfg)
    path = [k.strip() for k in args.at.split(",") if k.strip()]
    out = mutate_along(q, path)
    _emit(cfg, out.to_json(), {"quiver.dot": dot.quiver_dot(out)})
    return 0


def cmd_realize(cfg: RunConfig, args) -> int:
    r: Realization = realize_quiver(_input_quiver(cfg))
    st = Setting.from_realization(r)
    _emit(
        cfg,
        to_distribution(r.model, r.ct),
        {"ar_quiver.dot": dot.ar_quiver_dot(r.model, tau_t=st.tau_t, summands=_summand_labels(st))},
    )
    return 0


def _relations(st: Setting, ids) -> list[str]:
    order = {a.id: i for i, a in enumerate(st.quiver.arrows)}
    return sorted(ids, key=order.__getitem__)


def cmd_slices(cfg: RunConfig, args) -> int:
    st = _setting(cfg)
    m = st.model
    class_of: dict = {}
    entries, dots = [], {}
    for s in st.legal_slices:
        if s not in class_of:
            k = len({*class_of.values()})
            for member in st.homotopy_class(s):
                class_of[member] = k
        entries.append(
            {
                "members": serialize.slice_to_json(s.members, key=m.key),
                "relations": _relations(st, st.annihilator_set(s)),
                "class": class_of[s],
            }
        )
        dots[f"slice_{len(entries) - 1:03d}.dot"] = dot.ar_quiver_dot(
            m, s.members, st.tau_t, _summand_labels(st)
        )
    payload = {"quiver": st.quiver.to_json(), "slices": entries}
    _emit(cfg, payload, dots)
    return 0


def cmd_check(cfg: RunConfig, args) -> int:
    st = _setting(cfg)
    ids = st.arrow_ids(parse_arrow_list(args.set))
    tilted = st.is_tilted_admissible(ids)
    if cfg.fmt == "json":
        arrows = [st.quiver.arrow(i) for i in _relations(st, ids)]
        sys.stdout.write(
            serialize.dumps(
                {
                    "relations": _relations(st, ids),
                    "tilted": tilted,
                    "supporting_slices": len(st.slices_in_span(arrows)),
                }
            )
        )
    else:
        sys.stdout.write("tilted\n" if tilted else "not-tilted\n")
    return 0


def cmd_maximal_tilted(cfg: RunConfig, args) -> int:
    st = _setting(cfg)
    res = maximal_tilted_subalgebras(st)
    dots = {}
    for i, p in enumerate(res.presentations):
        dots[f"presentation_{i:03d}.dot"] = dot.quiver_dot(res.quiver, p.relations, name=f"C{i + 1}")
        dots[f"presentation_{i:03d}_slices.dot"] = dot.ar_quiver_dot(
            st.model, res.slices[p.relations].members, st.tau_t, _summand_labels(st), name=f"class{i + 1}"
        )
    _emit(cfg, serialize.result_to_json(res), dots)
    return 0


def cmd_oracle(cfg: RunConfig, args) -> int:
    st = _setting(cfg)
    rep = oracle_report(st.model, st.ct, st.quiver)
    _emit(cfg, {"quiver": st.quiver.to_json(), "report": rep.to_json()}, {})
    return 0


def cmd_validate_slice(cfg: RunConfig, args) -> int:
    st = _setting(cfg)
    raw = serialize.slice_from_json(_read_json(args.slice))
    members = [st.model.canonical(v) for v in raw]
    out: dict = {"local_slice": False, "legal": False, "relations": None}
    try:
        s = st.lift_section(members)
    except MalformedInputError as exc:
        out["reason"] = str(exc)
    else:
        out["local_slice"] = True
        out["legal"] = st.is_legal(s)
        if out["legal"]:
            out["relations"] = _relations(st, st.annihilator_set(s))
    _emit(cfg, out, {"slice.dot": dot.ar_quiver_dot(st.model, members, st.tau_t, _summand_labels(st))})
    return 0


_DEFAULT_FORMAT = {"check": "text", "build-ar": "dot"}

COMMANDS = {
    "build-ar": cmd_build_ar,
    "mutate": cmd_mutate,
    "realize": cmd_realize,
    "slices": cmd_slices,
    "check": cmd_check,
    "maximal-tilted": cmd_maximal_tilted,
    "oracle": cmd_oracle,
    "validate-slice": cmd_validate_slice,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltforge",
        description="Maximal tilted subalgebras of cluster-tilted algebras of Dynkin type.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--quiver", help="quiver JSON file")
        src.add_argument("--dynkin", help="Dynkin type such as A3, D5, E6")
        if name not in ("mutate", "realize"):
            src.add_argument("--distribution", help="distribution JSON file")
        p.add_argument("--orientation", choices=("linear", "alternating"), default="linear")
        fmts = ("text", "json") if name == "check" else ("json", "dot", "both")
        p.add_argument("--format", dest="fmt", choices=fmts, default=_DEFAULT_FORMAT.get(name, "json"))
        p.add_argument("--out-dir", help="directory for DOT files")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "mutate":
            p.add_argument("--vertex", "--at", dest="at", required=True, help="comma separated vertices, applied left to right")
        if name == "check":
            p.add_argument("--set", required=True, help='arrows such as "1->2,3->4"')
        if name == "validate-slice":
            p.add_argument("--slice", required=True, help="slice JSON file")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        quiver=args.quiver,
        dynkin=args.dynkin,
        orientation=args.orientation,
        distribution=getattr(args, "distribution", None),
        fmt=args.fmt,
        out_dir=args.out_dir,
        verbose=args.verbose,
    )
    try:
        return COMMANDS[cfg.command](cfg, args)
    except TiltforgeError as exc:
        print(f"tiltforge: {exc}", file=sys.stderr)
        return exc.exit_code
    except AssertionError as exc:
        print(f"tiltforge: internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
