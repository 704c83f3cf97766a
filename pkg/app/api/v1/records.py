"""Record export endpoint"""

from flask import Blueprint, Response

from app.services.export_service import ExportService
from app.services.reader_cache import reader_state

records_bp = Blueprint('records', __name__)


@records_bp.route('/<path:object_id>', methods=['GET'])
def get_record(object_id):
    """
    Get the record of one catalogued object

    Response (application/json), byte-identical to ``export record``:
        {
          "assets": [...],
          "asset_levels": [0, 1, 2],
          "creators": [{"agent": "VIAF:7392797", "role": "author"}],
          "id": "aldr-0001",
          "process": [...],
          "scenes": ["..."],
          "type": "Specimen",
          ...
        }
    """
    store, registry = reader_state()
    return Response(ExportService(store, registry).record(object_id), mimetype='application/json')
