"""Command-line entry point: python manage.py <command>"""

from flask.cli import FlaskGroup

from app import create_app

cli = FlaskGroup(create_app=create_app, help='Heritage twin knowledge-graph engine.')

if __name__ == '__main__':
    cli()
