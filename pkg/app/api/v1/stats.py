"""Aggregate statistics endpoint"""

from flask import Blueprint, Response, current_app, jsonify, request

from app.services.reader_cache import reader_state
from app.services.stats_service import Grouping, StatsService, render_csv, render_text

stats_bp = Blueprint('stats', __name__)


@stats_bp.route('', methods=['GET'])
def get_stats():
    """
    Object counts at the latest version

    Query:
        by: room | type | technique | stage (default room)
        format: text | csv (default text)

    Response: the same table ``stats`` prints
    """
    grouping = request.args.get('by', Grouping.ROOM)
    output = request.args.get('format', 'text')
    if grouping not in Grouping.ALL or output not in ('text', 'csv'):
        return jsonify({
            'success': False,
            'error': f'by must be one of {", ".join(Grouping.ALL)} and format one of text, csv'
        }), 400

    store, _ = reader_state()
    frame = StatsService(current_app.config['TWIN_EXTRA_TECHNIQUES']).counts(store, grouping)
    if output == 'csv':
        return Response(render_csv(frame), mimetype='text/csv')
    return Response(render_text(frame), mimetype='text/plain')
