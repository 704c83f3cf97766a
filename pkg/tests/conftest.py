from pathlib import Path

import pytest

from app import create_app
from app.extensions import db

FIXTURES = Path(__file__).parent / 'fixtures'
INGEST_AT = '2024-01-01T00:00:00Z'


@pytest.fixture
def app(tmp_path):
    """Fresh app per test: in-memory database, store root under tmp_path"""
    app = create_app('testing')
    app.config['TWIN_STORE_ROOT'] = str(tmp_path / 'store')
    yield app
    with app.app_context():
        db.session.remove()
        db.drop_all()


@pytest.fixture
def app_context(app):
    with app.app_context():
        yield app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def exhibition_bibliographic():
    return FIXTURES / 'exhibition_bibliographic.csv'


@pytest.fixture
def exhibition_digitisation():
    return FIXTURES / 'exhibition_digitisation.csv'


@pytest.fixture
def ingested(runner, exhibition_bibliographic, exhibition_digitisation):
    """Runner over a store holding one ingest of both exhibition fixtures"""
    result = runner.invoke(args=[
        'ingest', str(exhibition_bibliographic),
        '--digitisation', str(exhibition_digitisation),
        '--at', INGEST_AT,
    ])
    assert result.exit_code == 0, result.output
    return runner
