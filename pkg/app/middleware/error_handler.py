"""JSON error envelopes for domain and HTTP errors"""

from flask import jsonify, request
from werkzeug.exceptions import HTTPException

from app.exceptions import TwinError


def register_error_handlers(app):
    """Map errors to ``{"success": false, "error": ...}`` with the right status"""

    @app.errorhandler(TwinError)
    def handle_twin_error(e):
        app.logger.warning('Request rejected', extra={
            'error': e.message,
            'type': type(e).__name__,
            'status_code': e.status_code,
            'endpoint': request.path
        })
        return jsonify(e.to_dict()), e.status_code

    @app.errorhandler(HTTPException)
    def handle_http_error(e):
        return jsonify({
            'success': False,
            'error': e.description
        }), e.code

    @app.errorhandler(Exception)
    def handle_unexpected(e):
        app.logger.exception('Unhandled error', extra={'endpoint': request.path})
        return jsonify({
            'success': False,
            'error': 'Internal server error'
        }), 500
