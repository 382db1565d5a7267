"""Command-line front door.

The CLI is a thin client of the HTTP service: every command builds a
request model, posts it to the service (an in-process ASGI instance by
default, or a remote server via ``--server``), and formats the response.
Exit codes: 0 success, 1 domain error, 2 resource guard, 3 I/O or parse
error (including usage errors).
"""

from __future__ import annotations

import asyncio
import json
import os
import sys

import click
import httpx

EXIT_DOMAIN = 1
EXIT_RESOURCE = 2
EXIT_IO = 3

_CODE_TO_EXIT = {
    "domain-error": EXIT_DOMAIN,
    "resource-limit": EXIT_RESOURCE,
    "parse-error": EXIT_IO,
}


class CliFailure(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _post(ctx_obj: dict, path: str, payload: dict) -> dict:
    server = ctx_obj.get("server")
    if server:
        try:
            with httpx.Client(base_url=server, timeout=None) as client:
                response = client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise CliFailure(EXIT_IO, f"cannot reach {server}: {exc}")
    else:
        from .service import create_app

        app = create_app(
            cache_dir=ctx_obj.get("cache_dir"),
            results_dir=ctx_obj.get("results_dir"),
        )

        async def call():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://engine", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        response = asyncio.run(call())

    if response.status_code == 200:
        return response.json()
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = None
    if isinstance(detail, dict) and "code" in detail:
        exit_code = _CODE_TO_EXIT.get(detail["code"], EXIT_DOMAIN)
        raise CliFailure(exit_code, detail.get("message", "engine error"))
    raise CliFailure(EXIT_IO, f"service error (HTTP {response.status_code}): {detail}")


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliFailure(EXIT_IO, f"cannot read {path}: {exc}")


def _ideal_payload(ideal: str | None, corpus: str | None, p: int | None) -> dict:
    if (ideal is None) == (corpus is None):
        raise CliFailure(EXIT_IO, "provide exactly one of --ideal / --corpus")
    if ideal is not None:
        return {"ideal": _read_file(ideal)}
    payload: dict = {"corpus": corpus.replace("-", "_")}
    if p is not None:
        payload["p"] = p
    return payload


def _emit(ctx_obj: dict, data: dict, text: str) -> None:
    if ctx_obj["output"] == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(text, nl=False)
        if not text.endswith("\n"):
            click.echo()


def _fields_payload(field: tuple[str, ...]) -> list[str]:
    return list(field) if field else ["Q"]


def _render_table(table: dict) -> str:
    lines = [f"field {table['field']}"]
    lines.append("  total: " + " ".join(f"b{i}={v}" for i, v in table["total"]))
    graded = " ".join(f"b{i},{j}={v}" for i, j, v in table["graded"])
    lines.append("  graded: " + graded)
    return "\n".join(lines) + "\n"


@click.group()
@click.option("--output", type=click.Choice(["text", "json"]), default="text",
              help="Output format for results.")
@click.option("--server", default=None, metavar="URL",
              help="Use a remote service instead of the in-process engine.")
@click.option("--cache-dir", default=None, envvar="CHARBETTI_CACHE_DIR",
              help="Directory for the persistent Betti-table cache.")
@click.option("--results-dir", default=None, help="Directory for scan reports.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Engine parallelism bound.")
@click.option("--seed", type=int, default=None,
              help="Seed for randomized corpora (current commands are "
                   "deterministic; accepted for reproducible pipelines).")
@click.pass_context
def main(ctx, output, server, cache_dir, results_dir, jobs, seed):
    """Exact Betti numbers of monomial ideals over Q and F_p, and
    characteristic-dependence experiments."""
    ctx.obj = {
        "output": output,
        "server": server,
        "cache_dir": cache_dir,
        "results_dir": results_dir,
        "jobs": jobs,
        "seed": seed,
    }


@main.command()
@click.option("--ideal", type=str, default=None, help="Ideal file.")
@click.option("--corpus", type=str, default=None, help="Corpus ideal name.")
@click.option("--p", type=int, default=None)
@click.option("--power", type=int, default=1, show_default=True)
@click.option("--field", multiple=True, help="Q or F<p>; repeatable.")
@click.option("--i-max", type=int, default=None,
              help="Only compute homological indices up to this bound.")
@click.option("--multidegree", default=None,
              help="Single multigraded value at this monomial (needs --index).")
@click.option("--index", type=int, default=None)
@click.option("--quotient-indexing", is_flag=True,
              help="Report indices for the quotient ring resolution (shift by one).")
@click.pass_obj
def betti(obj, ideal, corpus, p, power, field, i_max, multidegree, index,
          quotient_indexing):
    """Betti tables of an ideal (or one multigraded value)."""
    payload = _ideal_payload(ideal, corpus, p)
    payload.update({"power": power, "fields": _fields_payload(field),
                    "jobs": obj["jobs"]})
    if multidegree is not None or index is not None:
        if multidegree is None or index is None:
            raise CliFailure(EXIT_IO, "--multidegree and --index go together")
        payload.update({"multidegree": multidegree, "index": index})
        data = _post(obj, "/v1/betti-at", payload)
        text = "\n".join(
            f"beta_({data['index']}, {data['multidegree']}) over {tag} = {v}"
            for tag, v in sorted(data["values"].items())
        )
        _emit(obj, data, text + "\n")
        return
    payload["quotient_indexing"] = quotient_indexing
    if i_max is not None:
        payload["i_max"] = i_max
    data = _post(obj, "/v1/betti", payload)
    _emit(obj, data, "".join(_render_table(t) for t in data["tables"]))


@main.command()
@click.option("--complex", "complex_", type=str, default=None, help="Complex file.")
@click.option("--corpus", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.option("--field", default="Z", show_default=True,
              help="Z for integer homology, or Q / F<p>.")
@click.pass_obj
def homology(obj, complex_, corpus, p, field):
    """Reduced simplicial homology of a complex."""
    payload: dict = {"field": field, "jobs": obj["jobs"]}
    if (complex_ is None) == (corpus is None):
        raise CliFailure(EXIT_IO, "provide exactly one of --complex / --corpus")
    if complex_ is not None:
        payload["complex"] = _read_file(complex_)
    else:
        payload["corpus"] = corpus.replace("-", "_")
        if p is not None:
            payload["p"] = p
    data = _post(obj, "/v1/homology", payload)
    lines = []
    for d, v in sorted(data["dims"].items(), key=lambda kv: int(kv[0])):
        lines.append(f"H~_{d} rank {v}")
    for d, factors in sorted((data.get("torsion") or {}).items(),
                             key=lambda kv: int(kv[0])):
        lines.append(f"H~_{d} torsion " + " ".join(f"Z/{f}" for f in factors))
    _emit(obj, data, "\n".join(lines) + "\n" if lines else "trivial\n")


@main.command()
@click.argument("h", type=int)
@click.option("--ideal", type=str, default=None)
@click.option("--corpus", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.pass_obj
def power(obj, h, ideal, corpus, p):
    """Minimal generators of the h-th power, in the ideal text format."""
    payload = _ideal_payload(ideal, corpus, p)
    payload.update({"h": h, "jobs": obj["jobs"]})
    data = _post(obj, "/v1/power", payload)
    _emit(obj, data, data["text"])


@main.command()
@click.argument("name")
@click.option("--p", type=int, default=None)
@click.option("--emit", type=click.Choice(["ideal", "complex", "graph"]),
              default=None, help="Representation to emit.")
@click.pass_obj
def construct(obj, name, p, emit):
    """Emit a named corpus object (dunce-cap needs --p)."""
    payload: dict = {"name": name.replace("-", "_")}
    if p is not None:
        payload["p"] = p
    if emit is not None:
        payload["emit"] = emit
    data = _post(obj, "/v1/construct", payload)
    _emit(obj, data, data["text"])


@main.command()
@click.option("--ideal", type=str, default=None)
@click.option("--corpus", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.option("--prime", multiple=True, type=int, help="Prime to compare; repeatable.")
@click.option("--max-power", type=int, default=1, show_default=True)
@click.option("--i-max", type=int, default=None)
@click.option("--probe-indices", default=None,
              help="Space-separated homological indices for guard fallback probes.")
@click.option("--probe-exponents", default=None,
              help="Space-separated exponent template (h allowed), e.g. "
                   "'1 1 1 h h 1 1 1'.")
@click.option("--persist", is_flag=True, help="Save the report content-addressed.")
@click.pass_obj
def scan(obj, ideal, corpus, p, prime, max_power, i_max, probe_indices,
         probe_exponents, persist):
    """Scan powers for characteristic-dependent Betti numbers."""
    payload = _ideal_payload(ideal, corpus, p)
    payload.update({
        "primes": list(prime) if prime else [2],
        "max_power": max_power,
        "persist": persist,
        "jobs": obj["jobs"],
    })
    if i_max is not None:
        payload["i_max"] = i_max
    if probe_indices:
        payload["probe_indices"] = [int(tok) for tok in probe_indices.split()]
    if probe_exponents:
        payload["probe_exponents"] = probe_exponents.split()
    data = _post(obj, "/v1/scan", payload)
    report = data["report"]
    lines = [f"verdict: {report['verdict']}"]
    for diff in report["diffs"]:
        lines.append(
            f"h={diff['h']} p={diff['p']} i={diff['i']}: "
            f"Q={diff['q_value']} F{diff['p']}={diff['p_value']}"
        )
    if data.get("saved_to"):
        lines.append(f"saved: {data['saved_to']}")
    _emit(obj, data, "\n".join(lines) + "\n")


@main.command()
@click.option("--ideal", type=str, required=True, help="Ideal file for I.")
@click.option("--j", "j_part", type=str, required=True, help="Ideal file for J.")
@click.option("--k", "k_part", type=str, required=True, help="Ideal file for K.")
@click.option("--field", multiple=True)
@click.pass_obj
def splitting(obj, ideal, j_part, k_part, field):
    """Check beta_i(I) = beta_i(J) + beta_i(K) + beta_{i-1}(J n K)."""
    payload = {
        "ideal": _read_file(ideal),
        "j_part": _read_file(j_part),
        "k_part": _read_file(k_part),
        "fields": _fields_payload(field),
        "jobs": obj["jobs"],
    }
    data = _post(obj, "/v1/splitting", payload)
    lines = []
    for res in data["results"]:
        verdict = "SPLITTING" if res["holds"] else "NOT A SPLITTING"
        lines.append(f"field {res['field']}: {verdict} "
                     f"(discrepancy {res['discrepancy']})")
    _emit(obj, data, "\n".join(lines) + "\n")


@main.command()
@click.option("--ideal", type=str, default=None)
@click.option("--corpus", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.option("--w", required=True, help="Monomial on fresh variables, e.g. 'y1 y2'.")
@click.option("--power", "h", type=int, default=1, show_default=True)
@click.option("--field", multiple=True)
@click.pass_obj
def formula(obj, ideal, corpus, p, w, h, field):
    """Compare the additive formula for (I+(w))^h with direct computation."""
    payload = _ideal_payload(ideal, corpus, p)
    payload.update({"w": w, "h": h, "fields": _fields_payload(field),
                    "jobs": obj["jobs"]})
    data = _post(obj, "/v1/formula", payload)
    lines = [
        f"field {res['field']}: {res['verdict']} "
        f"direct={res['direct']} formula={res['formula']}"
        for res in data["results"]
    ]
    _emit(obj, data, "\n".join(lines) + "\n")


@main.command()
@click.option("--ideal", type=str, default=None)
@click.option("--corpus", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.option("--field", multiple=True)
@click.option("--max-power", type=int, default=2, show_default=True)
@click.pass_obj
def regularity(obj, ideal, corpus, p, field, max_power):
    """Regularity of powers per field, with trailing linear estimates."""
    payload = _ideal_payload(ideal, corpus, p)
    payload.update({"fields": _fields_payload(field), "max_power": max_power,
                    "jobs": obj["jobs"]})
    data = _post(obj, "/v1/regularity", payload)
    profile = data["profile"]
    lines = [f"status: {profile['status']}"]
    for tag, fp in sorted(profile["fields"].items()):
        regs = " ".join(f"reg(I^{h})={r}" for h, r in fp["reg"])
        lines.append(f"field {tag}: {regs}")
        if fp["slope"] is not None:
            lines.append(
                f"  trailing line: {fp['slope']}*h + {fp['intercept']} "
                f"(stable from h={fp['stability_index']})"
            )
    if profile["c"] is not None:
        lines.append(f"c = {profile['c']}")
        for tag, line in sorted(profile["predicted_lines"].items()):
            lines.append(f"  {tag}: {line['line']} [{line['status']}]")
    _emit(obj, data, "\n".join(lines) + "\n")


@main.command()
@click.option("--complex", "complex_", type=str, required=True, help="Complex file.")
@click.pass_obj
def dual(obj, complex_):
    """Alexander dual of a complex (relative to its vertex set)."""
    data = _post(obj, "/v1/dual", {"complex": _read_file(complex_)})
    _emit(obj, data, data["text"])


@main.command()
@click.option("--ideal", type=str, default=None)
@click.option("--corpus", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.pass_obj
def polarize(obj, ideal, corpus, p):
    """Polarization: the squarefree ideal with the same lcm lattice."""
    payload = _ideal_payload(ideal, corpus, p)
    payload["jobs"] = obj["jobs"]
    data = _post(obj, "/v1/polarize", payload)
    _emit(obj, data, data["text"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8421, show_default=True)
@click.pass_obj
def serve(obj, host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(cache_dir=obj.get("cache_dir"),
                     results_dir=obj.get("results_dir"))
    uvicorn.run(app, host=host, port=port)


def run(argv: list[str] | None = None) -> int:
    """Entry point returning an exit code instead of raising SystemExit."""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        main.main(args=argv, standalone_mode=False)
        return 0
    except CliFailure as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(exc.format_message(), err=True)
        click.echo("run with --help for usage", err=True)
        return EXIT_IO
    except click.ClickException as exc:
        exc.show()
        return EXIT_IO
    except click.exceptions.Abort:
        return EXIT_IO


def cli_entry() -> None:  # console-script entry point
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    cli_entry()
