"""Basic graph pattern query endpoint"""

from dateutil.parser import isoparse
from flask import Blueprint, Response, jsonify, request

from app.services.query_service import QueryMode, QuerySelector, run_query
from app.services.reader_cache import reader_state

query_bp = Blueprint('query', __name__)


@query_bp.route('', methods=['POST'])
def post_query():
    """
    Evaluate a pattern against the store

    Request (application/json):
        {
            "pattern": "?o <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> ?t .",
            "mode": "at" | "cross-version" | "delta" | "cross-delta",
            "at": "2024-05-01T00:00:00Z",
            "entity": "obj/aldr-0001",
            "k": 2,
            "side": "insertions" | "deletions"
        }

    Response (text/tab-separated-values): the same bytes ``query`` prints
    """
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or not isinstance(data.get('pattern'), str):
        return jsonify({
            'success': False,
            'error': 'Body must be a JSON object with a "pattern" string'
        }), 400

    try:
        at = isoparse(data['at']) if data.get('at') else None
    except (TypeError, ValueError):
        return jsonify({
            'success': False,
            'error': f'"at" is not an ISO 8601 timestamp: {data.get("at")!r}'
        }), 400

    selector = QuerySelector(
        mode=data.get('mode') or QueryMode.AT,
        at=at,
        entity=data.get('entity'),
        k=data.get('k'),
        side=data.get('side') or 'insertions',
    )
    store, _ = reader_state()
    return Response(run_query(store, data['pattern'], selector), mimetype='text/tab-separated-values')
