"""Command-line front door; every write to the store goes through these commands"""

import json
import os
import re
from contextlib import contextmanager
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path

import click
from dateutil.parser import isoparse
from flask import current_app
from flask.cli import with_appcontext

from app.exceptions import TwinError
from app.extensions import db
from app.repositories.catalog_repository import ProcessEntryRepository
from app.schemas.asset_schema import AssetFormat, AssetRecord, AssetRef, ParadataEntry
from app.schemas.catalog_schema import LicenceVocab
from app.schemas.process_schema import ModelLevel
from app.schemas.rdf_schema import CommitMeta, format_timestamp, to_utc
from app.services.export_service import ExportService, render_json
from app.services.glb_service import glb_summary, validate_glb_header
from app.services.ingest_service import IngestConfig, IngestService
from app.services.process_service import process_from_document, summarize_workflow
from app.services.query_service import QueryMode, QuerySelector, run_query
from app.services.registry_service import RegistryService
from app.services.stats_service import Grouping, StatsService, render_csv, render_text
from app.services.store_service import StoreService
from app.utils.constants import PARADATA_METHODS
from app.utils.store_lock import store_lock

ASSET_REF = re.compile(r'(?P<object_id>.+)/l(?P<level>[0-2])')


class TimestampParam(click.ParamType):
    """ISO 8601 instant, normalised to UTC seconds"""
    name = 'timestamp'

    def convert(self, value, param, ctx):
        if isinstance(value, datetime):
            return to_utc(value)
        try:
            return to_utc(isoparse(value))
        except ValueError:
            self.fail(f'{value!r} is not an ISO 8601 timestamp', param, ctx)


TIMESTAMP = TimestampParam()


def twin_errors(f):
    """Report domain errors as ``Error: ...`` on stderr with a non-zero exit"""
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except TwinError as e:
            current_app.logger.warning('Command failed', extra={
                'command': f.__name__, 'error': e.message, 'type': type(e).__name__,
            })
            raise click.ClickException(e.message)
    return wrapper


def _store():
    return StoreService(current_app.config['TWIN_BASE_IRI']).load()


def _registry(seed=None):
    return RegistryService().load(seed)


@contextmanager
def _writer():
    """Writer lock plus a schema that is guaranteed to exist"""
    with store_lock(current_app.config['TWIN_STORE_ROOT']):
        db.create_all()
        yield


def _meta(agent, description, at, source=None) -> CommitMeta:
    agent = agent or current_app.config['TWIN_DEFAULT_AGENT']
    return CommitMeta.of(agent, description, at or datetime.now(timezone.utc), source)


def _asset_ref(text: str) -> AssetRef:
    match = ASSET_REF.fullmatch(text)
    if match:
        return AssetRef(match.group('object_id'), ModelLevel(int(match.group('level'))))
    return AssetRef(text, ModelLevel.LEVEL2)


@click.command('init-store')
@with_appcontext
@twin_errors
def init_store():
    """Create the store root and its tables."""
    with _writer():
        pass
    click.echo(f"store ready at {os.path.abspath(current_app.config['TWIN_STORE_ROOT'])}")


@click.command('ingest')
@click.argument('bibliographic', type=click.Path(dir_okay=False, path_type=Path))
@click.option('--digitisation', type=click.Path(dir_okay=False, path_type=Path),
              help='Digitisation dataset CSV.')
@click.option('--profile', default='bibliographic', show_default=True,
              help='Bibliographic mapping: builtin profile name or mapping file.')
@click.option('--digitisation-profile', default='digitisation', show_default=True,
              help='Digitisation mapping: builtin profile name or mapping file.')
@click.option('--base-iri', help='Overrides the mapping base IRI.')
@click.option('--agent', help='Provenance agent (IRI or name).')
@click.option('--at', type=TIMESTAMP, help='Commit time; defaults to now.')
@click.option('--source', help='Primary source IRI recorded on every snapshot.')
@with_appcontext
@twin_errors
def ingest(bibliographic, digitisation, profile, digitisation_profile, base_iri, agent, at, source):
    """Ingest the bibliographic (and digitisation) CSV exports."""
    cfg = IngestConfig(
        bibliographic_csv=bibliographic,
        digitisation_csv=digitisation,
        bibliographic_profile=profile,
        digitisation_profile=digitisation_profile,
        base_iri=base_iri,
        agent=agent or current_app.config['TWIN_DEFAULT_AGENT'],
        at=at,
        source=source,
        extra_techniques=tuple(current_app.config['TWIN_EXTRA_TECHNIQUES']),
    )
    with _writer():
        report = IngestService(StoreService(current_app.config['TWIN_BASE_IRI'])).ingest(_store(), cfg)
    click.echo(report.render(), nl=False)
    if not report.ok:
        click.get_current_context().exit(1)


@click.command('stats')
@click.option('--by', 'grouping', type=click.Choice(Grouping.ALL), default=Grouping.ROOM, show_default=True)
@click.option('--csv', 'as_csv', is_flag=True, help='Machine-readable CSV instead of a text table.')
@with_appcontext
@twin_errors
def stats(grouping, as_csv):
    """Object counts at the latest version."""
    frame = StatsService(current_app.config['TWIN_EXTRA_TECHNIQUES']).counts(_store(), grouping)
    click.echo(render_csv(frame) if as_csv else render_text(frame), nl=False)


@click.command('query')
@click.argument('pattern')
@click.option('--at', type=TIMESTAMP, help='Single-version query at this instant (default: latest).')
@click.option('--cross-version', is_flag=True, help='Every run of versions in which each binding holds.')
@click.option('--delta', nargs=2, type=(str, int), default=None, metavar='ENTITY K',
              help='Query one side of snapshot K of ENTITY.')
@click.option('--side', type=click.Choice(['insertions', 'deletions']), default='insertions',
              show_default=True)
@click.option('--cross-delta', is_flag=True, help='Query both sides of every snapshot.')
@with_appcontext
@twin_errors
def query(pattern, at, cross_version, delta, side, cross_delta):
    """Evaluate a basic graph pattern; bindings are printed as TSV."""
    chosen = [mode for mode, on in ((QueryMode.CROSS_VERSION, cross_version),
                                    (QueryMode.DELTA, delta is not None),
                                    (QueryMode.CROSS_DELTA, cross_delta)) if on]
    if len(chosen) > 1:
        raise click.UsageError('choose at most one of --cross-version, --delta, --cross-delta')
    mode = chosen[0] if chosen else QueryMode.AT
    entity, k = delta if delta is not None else (None, None)
    selector = QuerySelector(mode=mode, at=at, entity=entity, k=k, side=side)
    click.echo(run_query(_store(), pattern, selector), nl=False)


@click.group('export')
def export():
    """Deterministic exports on stdout."""


@export.command('record')
@click.argument('object_id')
@with_appcontext
@twin_errors
def export_record(object_id):
    click.echo(ExportService(_store(), _registry()).record(object_id), nl=False)


@export.command('scene')
@click.argument('scene_id')
@with_appcontext
@twin_errors
def export_scene(scene_id):
    click.echo(ExportService(_store(), _registry()).scene(scene_id), nl=False)


@export.command('prov')
@click.argument('entity')
@with_appcontext
@twin_errors
def export_prov(entity):
    click.echo(ExportService(_store(), _registry()).prov(entity), nl=False)


@export.command('dump')
@with_appcontext
@twin_errors
def export_dump():
    click.echo(ExportService(_store(), _registry()).dump(), nl=False)


@click.group('snapshot')
def snapshot():
    """Inspect snapshot chains."""


@snapshot.command('log')
@click.argument('entity')
@with_appcontext
@twin_errors
def snapshot_log(entity):
    """One line per snapshot of ENTITY, oldest first."""
    store = _store()
    lines = ['ordinal\tvalid_from\tvalid_to\tinsertions\tdeletions\tdescription']
    for s in store.chain(store.resolve(entity)):
        lines.append('\t'.join([
            str(s.ordinal),
            format_timestamp(s.valid_from),
            format_timestamp(s.valid_to) if s.valid_to else '-',
            str(len(s.delta.insertions)),
            str(len(s.delta.deletions)),
            s.description,
        ]))
    click.echo('\n'.join(lines))


@click.command('restore')
@click.argument('entity')
@click.argument('k', type=int)
@click.option('--agent', help='Provenance agent (IRI or name).')
@click.option('--at', type=TIMESTAMP, help='Commit time; defaults to now.')
@with_appcontext
@twin_errors
def restore(entity, k, agent, at):
    """Commit a new head equal to snapshot K of ENTITY."""
    with _writer():
        store = _store()
        iri = store.resolve(entity)
        meta = _meta(agent, f"The entity '{iri}' has been restored to snapshot {k}.", at)
        restored = StoreService(store.base_iri).restore(store, iri, k, meta)
    click.echo(str(restored.id))


@click.group('scene')
def scene():
    """Publish and show scenes."""


@scene.command('create')
@click.option('--item', 'items', multiple=True, required=True,
              help='Level 2 asset as OBJECT_ID or OBJECT_ID/l2; repeatable.')
@click.option('--title', required=True)
@click.option('--seed', type=int, help='Seed for a reproducible scene id.')
@click.option('--link', 'metadata_link', help='Catalogue IRI the scene describes.')
@with_appcontext
@twin_errors
def scene_create(items, title, seed, metadata_link):
    with _writer():
        registry = _registry()
        created = RegistryService().create_scene(
            registry, [_asset_ref(item) for item in items], title, seed=seed, metadata_link=metadata_link)
    click.echo(render_json(created.to_dict()), nl=False)


@scene.command('show')
@click.argument('scene_id')
@with_appcontext
@twin_errors
def scene_show(scene_id):
    click.echo(render_json(_registry().scene(scene_id).to_dict()), nl=False)


@click.group('asset')
def asset():
    """Register and check digital assets."""


@asset.command('register')
@click.argument('object_id')
@click.argument('level', type=click.IntRange(0, 2))
@click.argument('asset_format', metavar='FORMAT')
@click.argument('path')
@click.option('--size', 'size_bytes', type=int, help='Size in bytes; read from PATH when omitted.')
@click.option('--texture-px', type=int, help='Largest texture side in pixels.')
@click.option('--licence', default='CC-BY', show_default=True)
@click.option('--paradata', multiple=True, metavar='REGION=METHOD', help='Repeatable.')
@with_appcontext
@twin_errors
def asset_register(object_id, level, asset_format, path, size_bytes, texture_px, licence, paradata):
    if size_bytes is None:
        if not os.path.isfile(path):
            raise click.UsageError(f'--size is required when {path} is not a readable file')
        size_bytes = os.path.getsize(path)
    entries = []
    for item in paradata:
        region, sep, method = item.rpartition('=')
        if not sep:
            raise click.BadParameter(f'{item!r} is not REGION=METHOD', param_hint='--paradata')
        entries.append(ParadataEntry(region.strip(), method.strip()))
    try:
        rec = AssetRecord(
            object_id=object_id,
            level=ModelLevel(level),
            format=AssetFormat.parse(asset_format),
            path=path,
            size_bytes=size_bytes,
            licence=LicenceVocab.parse(licence),
            texture_max_px=texture_px,
            paradata=tuple(entries),
        )
    except ValueError as e:
        raise click.BadParameter(str(e))
    with _writer():
        rec = RegistryService().register_asset(_registry(), rec)
    click.echo(render_json(rec.to_dict()), nl=False)


@asset.command('paradata')
@click.argument('object_id')
@click.argument('level', type=click.IntRange(0, 2))
@click.argument('region')
@click.argument('method', type=click.Choice(PARADATA_METHODS))
@with_appcontext
@twin_errors
def asset_paradata(object_id, level, region, method):
    """Record how REGION of an asset was produced."""
    with _writer():
        rec = RegistryService().attach_paradata(_registry(), object_id, level, region, method)
    click.echo(render_json(rec.to_dict()), nl=False)


@asset.command('validate-glb')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
def asset_validate_glb(path):
    """Check a binary glTF container header and chunk framing."""
    data = Path(path).read_bytes()
    report = validate_glb_header(data)
    if report.ok:
        click.echo(render_json(glb_summary(data)), nl=False)
        return
    for message in report.messages:
        click.echo(message)
    click.get_current_context().exit(1)


@click.command('workflow')
@with_appcontext
def workflow():
    """Per-stage and per-technique digitisation summary."""
    documents = ProcessEntryRepository().documents()
    records = [process_from_document(json.loads(documents[key])) for key in sorted(documents)]
    click.echo(render_json(summarize_workflow(records).to_dict()), nl=False)


@click.command('serve')
@click.option('--host', default='127.0.0.1', show_default=True)
@click.option('--port', default=5000, show_default=True, type=int)
@with_appcontext
def serve(host, port):
    """Run the read-only HTTP service."""
    app = current_app._get_current_object()
    try:
        app.run(host=host, port=port, debug=False, use_reloader=False)
    except OSError as e:
        raise click.ClickException(f'cannot bind {host}:{port}: {e.strerror or e}')


COMMANDS = (init_store, ingest, stats, query, export, snapshot, restore, scene, asset, workflow, serve)


def register_commands(app):
    for command in COMMANDS:
        app.cli.add_command(command)
