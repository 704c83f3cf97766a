"""Controlled vocabularies, namespaces and fixed identifiers"""

from rdflib import Namespace
from rdflib.namespace import RDF, XSD, DCTERMS, PROV

# Project namespace (subject IRIs); overridable per ingest through TWIN_BASE_IRI
DEFAULT_BASE_IRI = 'https://example.org/aldrovandi/'
VOCAB_BASE = DEFAULT_BASE_IRI + 'vocab/'

CRM = Namespace('http://www.cidoc-crm.org/cidoc-crm/')
CRMDIG = Namespace('http://www.ics.forth.gr/isl/CRMdig/')
OCO = Namespace('https://w3id.org/oc/ontology/')

STANDARD_PREFIXES = {
    'rdf': str(RDF),
    'xsd': str(XSD),
    'crm': str(CRM),
    'crmdig': str(CRMDIG),
    'prov': str(PROV),
    'dcterms': str(DCTERMS),
}

# Object types exactly as listed in the exhibition inventory, in table order
OBJECT_TYPES = (
    'Specimen',
    'Printed volume',
    'Manuscript table',
    'Manuscript volume',
    'Illuminated manuscript',
    'Herbarium',
    'Model',
    'Woodcut',
    'Painting',
    'Cast',
    'Medal',
    'Nautical chart',
    'Map',
    'Video',
    'Print',
    'Diorama',
    'Vase',
    'Knife handle',
    'Mask',
    'Pendant',
    'Artifact',
    'Gemstone',
    'Statue',
    'Necklace',
    'Rattle',
    'Lamp',
    'Axe',
    'Microscope',
    'Compass',
    'Bottle',
    'Electrostatic machine',
    'Discharge arc',
    'Technical instrument',
    'Rooms/Painted ceilings',
    'Panels with graphics',
)

ROOMS = range(1, 7)

TECHNIQUES = ('SLS', 'photogrammetry', 'CG modelling', 'reuse of existing model')
REUSE_TECHNIQUE = 'reuse of existing model'

# Paradata methods distinguish how a region of a model was produced
PARADATA_METHODS = ('photogrammetry', 'SLS', 'CG modelling', 'reuse')

LICENCES = {
    'CC0': 'https://creativecommons.org/publicdomain/zero/1.0/legalcode',
    'CC-BY': 'https://creativecommons.org/licenses/by/4.0/legalcode',
    'CC-BY-NC': 'https://creativecommons.org/licenses/by-nc/4.0/legalcode',
    'CC-BY-NC-SA': 'https://creativecommons.org/licenses/by-nc-sa/4.0/legalcode',
}
CUSTOM_LICENCE_PREFIX = 'custom:'

AUTHORITY_BASES = {
    'VIAF': 'https://viaf.org/viaf/{id}',
    'Wikidata': 'http://www.wikidata.org/entity/{id}',
    'GeoNames': 'https://sws.geonames.org/{id}/',
    'ULAN': 'http://vocab.getty.edu/ulan/{id}',
}

STAGE_NAMES = {
    1: 'Acquisition',
    2: 'Processing',
    3: 'Modelling',
    4: 'Optimisation',
    5: 'Export',
    6: 'MetadataCreation',
    7: 'Upload',
}

# Texture maps were capped at 16,384 px per side
MAX_TEXTURE_PX = 16384
# Observed maximum size of a level 0 model; informational only
OBSERVED_MAX_MODEL_BYTES = 800 * 1024 * 1024

SCENE_ID_LENGTH = 16
SCENE_ID_ALPHABET = 'abcdefghijklmnopqrstuvwxyz0123456789'

LIST_SEPARATOR = '|'
TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M:%SZ'
