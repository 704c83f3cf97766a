"""Flask application entry point (development server)"""

import os
from app import create_app

app = create_app()

if __name__ == '__main__':
    # Get port from environment or use default
    port = int(os.environ.get('PORT', 5000))

    # Read-only service; writes go through manage.py commands
    app.run(
        host=os.environ.get('HOST', '127.0.0.1'),
        port=port,
        debug=app.config['DEBUG']
    )
