"""Health endpoint"""

from flask import Blueprint, jsonify

from app.services.reader_cache import reader_state

health_bp = Blueprint('health', __name__)


@health_bp.route('', methods=['GET'])
def health():
    """
    Report the loaded store and registry sizes

    Response:
        {
            "success": true,
            "data": {"entities": 301, "snapshots": 301, "assets": 0, "scenes": 0}
        }
    """
    store, registry = reader_state()
    return jsonify({
        'success': True,
        'data': {
            'entities': len(store),
            'snapshots': store.snapshot_count,
            'assets': len(registry),
            'scenes': registry.scene_count,
        }
    }), 200
