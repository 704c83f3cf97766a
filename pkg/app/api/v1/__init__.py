"""API v1 Blueprint Registration"""

from flask import Blueprint
from app.api.v1.health import health_bp
from app.api.v1.query import query_bp
from app.api.v1.records import records_bp
from app.api.v1.scenes import scenes_bp
from app.api.v1.stats import stats_bp

# Read-only service; every write goes through the command line
api_v1 = Blueprint('api_v1', __name__)

# Register sub-blueprints
api_v1.register_blueprint(health_bp, url_prefix='/health')
api_v1.register_blueprint(records_bp, url_prefix='/records')
api_v1.register_blueprint(scenes_bp, url_prefix='/scenes')
api_v1.register_blueprint(stats_bp, url_prefix='/stats')
api_v1.register_blueprint(query_bp, url_prefix='/query')
