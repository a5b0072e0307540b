"""Batch command line interface.

Every subcommand is a thin adapter around one library operation: inputs are
document files, output is one canonical JSON object on stdout of the form
{"ok": bool, ...}.  Exit codes: 0 success, 1 unknown subcommand, 2 validation
error, 3 mathematical precondition failure.  The QREL_TOL environment
variable overrides the default tolerance; the --tol flag beats the variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import documents as docs
from .algebra import StarAlgebra, commutant, full_matrix_algebra
from .channel import CPMap, compose
from .config import Tolerance, get_tolerance, set_tolerance
from .errors import PreconditionError, QrelError, ValidationError
from .matrix import Projection
from .relation import (
    QuantumRelation,
    check_properties,
    classical_to_quantum,
    connects,
    diagonal_relation,
    is_independent,
    quantum_to_classical,
    restrict,
)
from .transport import (
    bipartite_graph,
    confusability,
    is_cp_morphism,
    kl_check,
    pullback,
    pushforward,
)
from .witness import recover_space, separate_projections, separate_vectors

COMMANDS = (
    "props",
    "commutant",
    "diagonal",
    "restrict",
    "independent",
    "push",
    "pull",
    "confusability",
    "bipartite",
    "kl-check",
    "morphism",
    "connects",
    "witness",
    "recover",
    "classical-embed",
    "classical-extract",
    "compose",
)

_USAGE = "usage: qrel <subcommand> [flags]; subcommands: " + ", ".join(COMMANDS)


class _ArgumentError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2) with its own text
        raise _ArgumentError(message)


def _build_parser(command: str) -> _Parser:
    parser = _Parser(prog=f"qrel {command}", add_help=False)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--algebra", type=str, default=None)
    need = lambda name: parser.add_argument(name, type=str, required=True)  # noqa: E731
    opt = lambda name: parser.add_argument(name, type=str, default=None)  # noqa: E731
    if command in ("props", "recover", "classical-extract"):
        need("--space")
    elif command in ("commutant", "diagonal"):
        pass  # --algebra carries the input
    elif command in ("restrict", "independent"):
        need("--space")
        need("--proj")
    elif command in ("push", "pull"):
        need("--space")
        need("--channel")
        opt("--codomain")
    elif command in ("confusability", "bipartite"):
        need("--channel")
    elif command == "kl-check":
        need("--channel")
        need("--proj")
    elif command == "morphism":
        need("--channel")
        need("--source")
        need("--target")
        opt("--codomain")
    elif command == "connects":
        need("--space")
        need("--p")
        need("--q")
        parser.add_argument("--k", type=int, required=True)
    elif command == "witness":
        need("--space")
        need("--matrix")
        parser.add_argument("--kind", choices=("projections", "vectors"), default="projections")
    elif command == "classical-embed":
        need("--relation")
    elif command == "compose":
        need("--first")
        need("--second")
    return parser


def _load_document(path_text: str) -> docs.Document:
    path = Path(path_text)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read {path_text}: {exc}") from exc
    return docs.parse(raw)


def _load_algebra(args, dim: int) -> StarAlgebra:
    if getattr(args, "algebra", None) is None:
        return full_matrix_algebra(dim)
    algebra = docs.algebra_from_document(_load_document(args.algebra))
    if algebra.dim_ambient != dim:
        raise ValidationError(
            f"algebra ambient dimension {algebra.dim_ambient} does not match {dim}"
        )
    return algebra


def _load_codomain(args, dim: int) -> StarAlgebra:
    if getattr(args, "codomain", None) is None:
        return full_matrix_algebra(dim)
    algebra = docs.algebra_from_document(_load_document(args.codomain))
    if algebra.dim_ambient != dim:
        raise ValidationError(
            f"codomain ambient dimension {algebra.dim_ambient} does not match {dim}"
        )
    return algebra


def _load_relation(args, space_flag: str = "space") -> QuantumRelation:
    space = docs.operator_space_from_document(_load_document(getattr(args, space_flag)))
    if not space.is_square:
        raise ValidationError("relation space must be square")
    algebra = _load_algebra(args, space.row_dim)
    return QuantumRelation(algebra, space)


def _load_channel(args, flag: str = "channel") -> CPMap:
    return docs.channel_from_document(_load_document(getattr(args, flag)))


def _load_projection(args, flag: str = "proj") -> Projection:
    return docs.projection_from_document(_load_document(getattr(args, flag)))


def _space_result(space) -> dict:
    return docs.document_body(docs.operator_space_document(space))


def _complex_list(vec: np.ndarray) -> list:
    return [{"re": float(z.real), "im": float(z.imag)} for z in vec]


def _run_props(args):
    flags = check_properties(_load_relation(args))
    return {
        "reflexive": flags.reflexive,
        "symmetric": flags.symmetric,
        "antisymmetric": flags.antisymmetric,
        "transitive": flags.transitive,
    }


def _run_commutant(args):
    if args.algebra is None:
        raise ValidationError("commutant requires --algebra")
    algebra = docs.algebra_from_document(_load_document(args.algebra))
    return docs.document_body(docs.algebra_document(commutant(algebra)))


def _run_diagonal(args):
    if args.algebra is None:
        raise ValidationError("diagonal requires --algebra")
    algebra = docs.algebra_from_document(_load_document(args.algebra))
    return _space_result(diagonal_relation(algebra).space)


def _run_restrict(args):
    restricted = restrict(_load_relation(args), _load_projection(args))
    return {
        "algebra": docs.document_body(docs.algebra_document(restricted.algebra)),
        "space": _space_result(restricted.space),
    }


def _run_independent(args):
    return is_independent(_load_relation(args), _load_projection(args))


def _run_push(args):
    channel = _load_channel(args)
    relation = _load_relation(args)
    codomain = _load_codomain(args, channel.out_dim)
    return _space_result(pushforward(relation, channel, codomain).space)


def _run_pull(args):
    channel = _load_channel(args)
    space = docs.operator_space_from_document(_load_document(args.space))
    if not space.is_square or space.row_dim != channel.out_dim:
        raise ValidationError("pull expects a square space on the channel output")
    codomain = _load_codomain(args, channel.out_dim)
    relation = QuantumRelation(codomain, space)
    domain = _load_algebra(args, channel.in_dim)
    return _space_result(pullback(relation, channel, domain).space)


def _run_confusability(args):
    channel = _load_channel(args)
    domain = _load_algebra(args, channel.in_dim)
    return _space_result(confusability(channel, domain).space)


def _run_bipartite(args):
    return _space_result(bipartite_graph(_load_channel(args)))


def _run_kl_check(args):
    report = kl_check(_load_channel(args), _load_projection(args))
    result: dict = {"is_code": report.is_code}
    if report.lambda_matrix is not None:
        result["lambda"] = docs.matrix_document(report.lambda_matrix).payload
    else:
        result["lambda"] = None
    return result


def _run_morphism(args):
    channel = _load_channel(args)
    source_space = docs.operator_space_from_document(_load_document(args.source))
    target_space = docs.operator_space_from_document(_load_document(args.target))
    source = QuantumRelation(_load_algebra(args, channel.in_dim), source_space)
    target = QuantumRelation(_load_codomain(args, channel.out_dim), target_space)
    verdict = is_cp_morphism(channel, source, target)
    witness = None
    if verdict.witness_generator is not None:
        witness = docs.document_body(docs.matrix_document(verdict.witness_generator))
    return {"strong": verdict.strong, "weak": verdict.weak, "witness_generator": witness}


def _run_connects(args):
    relation = _load_relation(args)
    p = docs.projection_from_document(_load_document(args.p))
    q = docs.projection_from_document(_load_document(args.q))
    return connects(relation, p, q, args.k)


def _run_witness(args):
    target = docs.matrix_from_document(_load_document(args.matrix))
    if args.kind == "vectors":
        space = docs.operator_space_from_document(_load_document(args.space))
        found = separate_vectors(space, target)
        return {
            "k": found.k,
            "alpha": _complex_list(found.alpha),
            "beta": _complex_list(found.beta),
        }
    relation = _load_relation(args)
    found = separate_projections(relation, target)
    return {
        "k": found.k,
        "P": docs.document_body(docs.projection_document(found.left)),
        "Q": docs.document_body(docs.projection_document(found.right)),
    }


def _run_recover(args):
    return _space_result(recover_space(_load_relation(args)))


def _run_classical_embed(args):
    rel = docs.classical_relation_from_document(_load_document(args.relation))
    return _space_result(classical_to_quantum(rel).space)


def _run_classical_extract(args):
    space = docs.operator_space_from_document(_load_document(args.space))
    if not space.is_square:
        raise ValidationError("classical-extract expects a square space")
    from .algebra import diagonal_algebra

    relation = QuantumRelation(diagonal_algebra(space.row_dim), space)
    rel = quantum_to_classical(relation)
    return docs.document_body(docs.classical_relation_document(rel))


def _run_compose(args):
    first = _load_channel(args, "first")
    second = _load_channel(args, "second")
    return docs.document_body(docs.channel_document(compose(second, first)))


_HANDLERS = {
    "props": _run_props,
    "commutant": _run_commutant,
    "diagonal": _run_diagonal,
    "restrict": _run_restrict,
    "independent": _run_independent,
    "push": _run_push,
    "pull": _run_pull,
    "confusability": _run_confusability,
    "bipartite": _run_bipartite,
    "kl-check": _run_kl_check,
    "morphism": _run_morphism,
    "connects": _run_connects,
    "witness": _run_witness,
    "recover": _run_recover,
    "classical-embed": _run_classical_embed,
    "classical-extract": _run_classical_extract,
    "compose": _run_compose,
}


def _emit(payload: dict) -> None:
    sys.stdout.write(docs.canonical_json(payload) + "\n")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stderr.write(_USAGE + "\n")
        return 1
    command = argv[0]
    if command not in COMMANDS:
        sys.stderr.write(f"unknown subcommand {command!r}\n{_USAGE}\n")
        return 1
    previous_tol = get_tolerance()
    try:
        args = _build_parser(command).parse_args(argv[1:])
        rel_eps = args.tol
        env_tol = os.environ.get("QREL_TOL")
        if rel_eps is None and env_tol is not None:
            try:
                rel_eps = float(env_tol)
            except ValueError as exc:
                raise ValidationError(f"QREL_TOL is not a number: {env_tol!r}") from exc
        if rel_eps is not None:
            set_tolerance(Tolerance(rel_eps=rel_eps, abs_floor=previous_tol.abs_floor))
        result = _HANDLERS[command](args)
    except ValidationError as exc:
        _emit({"ok": False, "error": str(exc)})
        return 2
    except PreconditionError as exc:
        _emit({"ok": False, "error": str(exc)})
        return 3
    except QrelError as exc:
        _emit({"ok": False, "error": str(exc)})
        return 2
    finally:
        set_tolerance(previous_tol)
    _emit({"ok": True, "result": result})
    return 0


if __name__ == "__main__":
    sys.exit(main())
