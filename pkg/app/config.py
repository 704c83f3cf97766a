import os
import tempfile
from dotenv import load_dotenv
from sqlalchemy.pool import StaticPool

load_dotenv()

STORE_ROOT = os.getenv('TWIN_STORE_ROOT', './storage')


class Config:
    """Base configuration"""
    # Flask
    SECRET_KEY = os.getenv('SECRET_KEY', 'dev-secret-key-change-in-production')
    JSON_SORT_KEYS = True

    # Store location: the SQLite file and the writer lock live under this root
    TWIN_STORE_ROOT = STORE_ROOT
    SQLALCHEMY_DATABASE_URI = os.getenv(
        'DATABASE_URL', 'sqlite:///' + os.path.abspath(os.path.join(STORE_ROOT, 'twin.db')))
    SQLALCHEMY_TRACK_MODIFICATIONS = False
    SQLALCHEMY_ECHO = False

    # Knowledge graph
    TWIN_BASE_IRI = os.getenv('TWIN_BASE_IRI', 'https://example.org/aldrovandi/')
    TWIN_DEFAULT_AGENT = os.getenv('TWIN_DEFAULT_AGENT', 'https://example.org/aldrovandi/agent/ingest')
    TWIN_EXTRA_TECHNIQUES = [t for t in os.getenv('TWIN_EXTRA_TECHNIQUES', '').split(',') if t.strip()]

    # CORS
    CORS_ORIGINS = os.getenv('CORS_ORIGINS', '*').split(',')

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', './logs/app.log')


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    TESTING = False


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    TESTING = False


class TestingConfig(Config):
    """Testing configuration"""
    DEBUG = True
    TESTING = True
    SQLALCHEMY_DATABASE_URI = 'sqlite://'
    SQLALCHEMY_ENGINE_OPTIONS = {
        # one shared in-memory database across the CLI runner and the test client
        'connect_args': {'check_same_thread': False},
        'poolclass': StaticPool,
    }
    TWIN_STORE_ROOT = os.path.join(tempfile.gettempdir(), 'heritage-twin-test')
    LOG_FILE = os.path.join(tempfile.gettempdir(), 'heritage-twin-test', 'logs', 'test.log')


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
