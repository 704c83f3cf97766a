from app.extensions import db
from app.models.base import CreatedAtMixin


class AssetRow(db.Model, CreatedAtMixin):
    __tablename__ = 'assets'
    __table_args__ = (db.UniqueConstraint('object_id', 'level', name='uq_asset_object_level'),)

    id = db.Column(db.Integer, primary_key=True)
    object_id = db.Column(db.String(200), nullable=False, index=True)
    level = db.Column(db.Integer, nullable=False)
    format = db.Column(db.String(30), nullable=False)
    path = db.Column(db.String(500), nullable=False)
    size_bytes = db.Column(db.BigInteger, nullable=False)
    texture_max_px = db.Column(db.Integer)
    licence = db.Column(db.String(200), nullable=False)

    paradata = db.relationship('ParadataRow', backref='asset', lazy='selectin',
                               order_by='ParadataRow.id')

    def __repr__(self):
        return f'<Asset {self.object_id} level {self.level}>'


class ParadataRow(db.Model, CreatedAtMixin):
    __tablename__ = 'paradata'
    __table_args__ = (db.UniqueConstraint('asset_id', 'region', 'method', name='uq_paradata_pair'),)

    id = db.Column(db.Integer, primary_key=True)
    asset_id = db.Column(db.Integer, db.ForeignKey('assets.id'), nullable=False, index=True)
    region = db.Column(db.String(255), nullable=False)
    method = db.Column(db.String(50), nullable=False)


class SceneRow(db.Model, CreatedAtMixin):
    __tablename__ = 'scenes'

    scene_id = db.Column(db.String(32), primary_key=True)
    title = db.Column(db.String(255), nullable=False)
    metadata_link = db.Column(db.String(500))

    items = db.relationship('SceneItemRow', backref='scene', lazy='selectin',
                            order_by='SceneItemRow.position')

    def __repr__(self):
        return f'<Scene {self.scene_id}>'


class SceneItemRow(db.Model):
    __tablename__ = 'scene_items'

    id = db.Column(db.Integer, primary_key=True)
    scene_id = db.Column(db.String(32), db.ForeignKey('scenes.scene_id'), nullable=False, index=True)
    position = db.Column(db.Integer, nullable=False)
    asset_id = db.Column(db.Integer, db.ForeignKey('assets.id'), nullable=False)

    asset = db.relationship('AssetRow')
