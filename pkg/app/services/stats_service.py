"""Aggregate counts over the latest dataset version"""

import logging
from typing import Callable, Dict, Optional, Tuple

import pandas as pd
from rdflib import URIRef
from rdflib.namespace import RDF

from app.schemas.catalog_schema import ObjectTypeVocab, slugify
from app.schemas.rdf_schema import nt_term
from app.services.process_service import technique_vocabulary
from app.services.query_service import parse_query
from app.services.version_store import VersionedStore
from app.utils.constants import CRM, STAGE_NAMES, VOCAB_BASE

logger = logging.getLogger(__name__)

OBJECT = nt_term(CRM['E22_Human-Made_Object'])


class Grouping:
    ROOM = 'room'
    TYPE = 'type'
    TECHNIQUE = 'technique'
    STAGE = 'stage'

    ALL = (ROOM, TYPE, TECHNIQUE, STAGE)


def _last_segment(iri: URIRef) -> str:
    return str(iri).rstrip('/').rsplit('/', 1)[-1]


def _stage_labels() -> Dict[str, Tuple[int, str]]:
    return {VOCAB_BASE + 'stage/' + slugify(name): (number, name) for number, name in STAGE_NAMES.items()}


class StatsService:
    """
    Counts distinct objects (or digitisation processes, for stages) per key.
    Every grouping is one pattern query at the latest version followed by a
    pandas group-by.
    """

    def __init__(self, extra_techniques=()):
        self.object_types = ObjectTypeVocab()
        self.techniques = {
            VOCAB_BASE + 'technique/' + slugify(label): label
            for label in technique_vocabulary(extra_techniques)
        }
        self.stages = _stage_labels()

    def _groupings(self) -> Dict[str, Tuple[str, Callable[[URIRef], Optional[str]]]]:
        rdf_type = nt_term(RDF.type)
        return {
            Grouping.ROOM: (
                f'?item {rdf_type} {OBJECT} . ?item {nt_term(CRM.P55_has_current_location)} ?key .',
                _last_segment,
            ),
            Grouping.TYPE: (
                f'?item {rdf_type} {OBJECT} . ?item {nt_term(CRM.P2_has_type)} ?key .',
                lambda iri: self.object_types.label_for(str(iri)),
            ),
            Grouping.TECHNIQUE: (
                f'?process {nt_term(CRM.P32_used_general_technique)} ?key . '
                f'?process {nt_term(CRM.P16_used_specific_object)} ?item .',
                lambda iri: self.techniques.get(str(iri)),
            ),
            Grouping.STAGE: (
                f'?item {nt_term(CRM.P2_has_type)} ?key . '
                f'?item {nt_term(CRM.P16_used_specific_object)} ?object .',
                lambda iri: self.stages.get(str(iri), (None, None))[1],
            ),
        }

    def counts(self, store: VersionedStore, grouping: str) -> pd.DataFrame:
        """
        Count table for one grouping

        Args:
            store: Loaded store
            grouping: One of room, type, technique, stage

        Returns:
            DataFrame with columns (grouping, count), sorted by key
            (rooms numerically, stages by ordinal, others by label)

        Raises:
            ValueError: For an unknown grouping
        """
        if grouping not in Grouping.ALL:
            raise ValueError(f'unknown grouping {grouping!r}; expected one of {", ".join(Grouping.ALL)}')
        pattern, label_of = self._groupings()[grouping]
        query = parse_query(pattern)
        names = [str(v) for v in query.variables]
        bindings = store.query_at(query)

        frame = pd.DataFrame([dict(zip(names, b)) for b in bindings], columns=names)
        frame[grouping] = frame['key'].map(label_of)
        frame = frame.dropna(subset=[grouping]).drop_duplicates(subset=[grouping, 'item'])
        counted = frame.groupby(grouping).size().reset_index(name='count')

        if grouping == Grouping.ROOM:
            counted = counted.sort_values(grouping, key=lambda keys: keys.astype(int))
        elif grouping == Grouping.STAGE:
            order = {name: number for number, name in self.stages.values()}
            counted = counted.sort_values(grouping, key=lambda keys: keys.map(order))
        else:
            counted = counted.sort_values(grouping)
        counted = counted.reset_index(drop=True)
        counted['count'] = counted['count'].astype(int)

        logger.info('Stats computed', extra={
            'grouping': grouping, 'groups': len(counted), 'total': int(counted['count'].sum()),
        })
        return counted


def render_text(frame: pd.DataFrame) -> str:
    """Aligned table with a closing total row; an empty table is its header alone"""
    if frame.empty:
        return '  '.join(frame.columns) + '\n'
    key = frame.columns[0]
    total = pd.DataFrame([{key: 'total', 'count': int(frame['count'].sum())}])
    return pd.concat([frame, total], ignore_index=True).to_string(index=False) + '\n'


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator='\n')
