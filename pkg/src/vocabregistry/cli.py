"""Command line entry points: serve, import, export, sweep, mint-check, and a
demo seeder. Flags override environment variables, which override the config
file.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import core, ingest, rescore
from .config import ServiceConfig, load_config
from .errors import RegistryError
from .exporters import ExportRequest, export
from .models import VoteDirection
from .store import Store

_CONFIG_FLAGS = ("store_path", "outbox_path", "naan", "host", "port", "base_url")


def _load(config_path, **flag_overrides) -> ServiceConfig:
    overrides = {k: v for k, v in flag_overrides.items() if v is not None}
    return load_config(config_path, overrides=overrides)


def _open_store(cfg: ServiceConfig) -> Store:
    path = Path(cfg.store_path)
    if path.exists():
        return Store.load(path, outbox_path=Path(cfg.outbox_path))
    return Store(outbox_path=Path(cfg.outbox_path))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="YAML configuration file.")
@click.option("--store", "store_path", default=None, help="Store snapshot path.")
@click.option("--outbox", "outbox_path", default=None, help="Outbox file path.")
@click.pass_context
def main(ctx, config_path, store_path, outbox_path):
    """Community vocabulary registry."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["flags"] = {"store_path": store_path, "outbox_path": outbox_path}


def _config_from_ctx(ctx, **extra) -> ServiceConfig:
    flags = dict(ctx.obj["flags"])
    flags.update(extra)
    return _load(ctx.obj["config_path"], **flags)


@main.command()
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.pass_context
def serve(ctx, host, port):
    """Run the HTTP service (persists the store on shutdown)."""
    from .api import serve as run_server

    cfg = _config_from_ctx(ctx, host=host, port=port)
    store = _open_store(cfg)
    click.echo(f"serving on {cfg.host}:{cfg.port} (store: {cfg.store_path})")
    run_server(store, cfg)


@main.command(name="import")
@click.option("--file", "file_path", type=click.Path(exists=True), required=True)
@click.option("--format", "format_name", required=True,
              type=click.Choice(list(ingest.FORMATS)))
@click.option("--as-user", "handle", required=True, help="Importing user handle.")
@click.option("--url", default=None, help="Source URL to record (defaults to file://).")
@click.option("--kind", type=click.Choice(["schema", "records"]), default="schema")
@click.option("--schema-id", default=None, help="Schema source id (records imports).")
@click.option("--collection-id", default=None)
@click.pass_context
def import_cmd(ctx, file_path, format_name, handle, url, kind, schema_id, collection_id):
    """Bulk import a vocabulary document."""
    cfg = _config_from_ctx(ctx)
    store = _open_store(cfg)
    user = store.user_by_handle(handle)
    if user is None:
        user = core.register_user(store, handle)
        click.echo(f"registered user {handle!r}")
    document = Path(file_path).read_bytes()
    source_url = url or Path(file_path).resolve().as_uri()
    try:
        if kind == "schema":
            result = ingest.import_schema(
                store, document, format_name, user.id, url=source_url,
                thresholds=cfg.thresholds, ark_config=cfg.ark_config(),
            )
            click.echo(
                f"imported {len(result.created_terms)} terms "
                f"({len(result.reused_terms)} reused, {len(result.created_triples)} triples) "
                f"as schema {result.source.id} [{result.schema_ark}]"
            )
        else:
            if not schema_id:
                raise click.UsageError("--schema-id is required for records imports")
            result = ingest.import_records(
                store, document, format_name, schema_id, user.id,
                collection_id=collection_id, url=source_url,
                thresholds=cfg.thresholds, ark_config=cfg.ark_config(),
            )
            click.echo(
                f"imported {len(result.created_terms)} object terms "
                f"({len(result.created_triples)} triples, {len(result.warnings)} warnings)"
            )
            for warning in result.warnings:
                click.echo(f"  warning: {warning}", err=True)
    except RegistryError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(1)
    rescore.drain(store, cfg.thresholds)
    store.save(cfg.store_path)


@main.command(name="export")
@click.option("--format", "format_name", default="json",
              type=click.Choice(["json", "xml", "rdf", "skos"]))
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Output file (stdout when omitted).")
@click.option("--collection", default=None)
@click.option("--schema", default=None)
@click.option("--contributor", default=None)
@click.option("--tag", default=None)
@click.option("--status", default=None)
@click.option("--include-versions", is_flag=True, default=False)
@click.pass_context
def export_cmd(ctx, format_name, out_path, collection, schema, contributor, tag, status,
               include_versions):
    """Export terms, grouped by the given filters."""
    cfg = _config_from_ctx(ctx)
    store = _open_store(cfg)
    request = ExportRequest(
        format=format_name, collection=collection, schema=schema,
        contributor=contributor, tag=tag, status=status,
        include_versions=include_versions,
    )
    body = export(store, request, base_url=cfg.resolved_base_url())
    if out_path:
        Path(out_path).write_bytes(body)
        click.echo(f"wrote {len(body)} bytes to {out_path}")
    else:
        sys.stdout.buffer.write(body)


@main.command()
@click.pass_context
def sweep(ctx):
    """Run the scheduled rescore pass (reputations, audits, scores)."""
    cfg = _config_from_ctx(ctx)
    store = _open_store(cfg)

    def fetcher(url: str) -> bytes:
        return ingest.default_fetcher(url, timeout=cfg.audit_timeout_seconds)

    processed = rescore.run_sweep(store, cfg.thresholds, fetcher=fetcher)
    click.echo(f"sweep processed {processed} queued event(s) over {len(store.terms)} terms")
    store.save(cfg.store_path)


@main.command(name="mint-check")
@click.pass_context
def mint_check(ctx):
    """Verify the ARK registry: parseability, uniqueness, counter integrity."""
    from . import ark

    cfg = _config_from_ctx(ctx)
    store = _open_store(cfg)
    problems = ark.check_registry(store)
    if problems:
        for problem in problems:
            click.echo(f"FAIL {problem}", err=True)
        sys.exit(1)
    click.echo(f"OK {len(store.ark_records)} ARK(s), counter at {store.ark_counter}")


@main.command()
@click.option("--users", "user_count", default=6, show_default=True)
@click.pass_context
def seed(ctx, user_count):
    """Populate a small demo data set (users, terms, votes, comments)."""
    from .demo import seed_demo

    cfg = _config_from_ctx(ctx)
    store = _open_store(cfg)
    summary = seed_demo(store, cfg, user_count=user_count)
    store.save(cfg.store_path)
    click.echo(
        f"seeded {summary['users']} users, {summary['terms']} terms, "
        f"{summary['votes']} votes (store: {cfg.store_path})"
    )


if __name__ == "__main__":
    main()
