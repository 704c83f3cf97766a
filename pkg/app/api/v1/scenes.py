"""Scene descriptor endpoint"""

from flask import Blueprint, Response

from app.services.export_service import ExportService
from app.services.reader_cache import reader_state

scenes_bp = Blueprint('scenes', __name__)


@scenes_bp.route('/<string:scene_id>', methods=['GET'])
def get_scene(scene_id):
    """
    Get a scene descriptor

    Response (application/json):
        {
          "items": [{"level": 2, "object_id": "aldr-0001"}],
          "metadata_link": null,
          "scene_id": "k3v9x0q2m1b7c4d8",
          "title": "Room 5 showcase"
        }
    """
    store, registry = reader_state()
    return Response(ExportService(store, registry).scene(scene_id), mimetype='application/json')
