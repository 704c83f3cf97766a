"""Builders for stores, random histories and a brute-force query oracle"""

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from rdflib import Literal, URIRef, Variable
from rdflib.namespace import XSD

from app.schemas.rdf_schema import BgpQuery, CommitMeta, Delta, Quad, Triple, lift
from app.services.version_store import VersionedStore

BASE = 'https://example.org/aldrovandi/'
EX = 'http://example.org/test/'
AGENT = BASE + 'agent/test'
START = datetime(2024, 1, 1, tzinfo=timezone.utc)

NODES = tuple(URIRef(f'{EX}n{i}') for i in range(4))
PREDICATES = tuple(URIRef(f'{EX}p{i}') for i in range(3))
LITERALS = (
    Literal('plain'),
    Literal('ciao', lang='it'),
    Literal('5', datatype=XSD.integer),
    Literal('say "hi"\nthen leave'),
)
OBJECTS = NODES + LITERALS
UNIVERSE = tuple(Triple(s, p, o) for s in NODES for p in PREDICATES for o in OBJECTS)


def utc(*args) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


def meta(at: datetime, description: str = 'test commit', agent: str = AGENT,
         source: Optional[str] = None) -> CommitMeta:
    return CommitMeta.of(agent, description, at, source)


def entity_iri(i: int) -> URIRef:
    return URIRef(f'{BASE}obj/e{i}')


def random_graph(rng: random.Random, low: int = 1, high: int = 6) -> Set[Triple]:
    return set(rng.sample(UNIVERSE, rng.randint(low, high)))


@dataclass
class History:
    """A randomised store plus the forward states it must reproduce"""
    store: VersionedStore
    # entity -> [(valid_from, graph)] in ordinal order
    states: Dict[URIRef, List[Tuple[datetime, FrozenSet[Quad]]]] = field(default_factory=dict)

    @property
    def versions(self) -> List[datetime]:
        return sorted({at for chain in self.states.values() for at, _ in chain})

    def entity_at(self, entity, at: datetime) -> Optional[FrozenSet[Quad]]:
        current = None
        for valid_from, graph in self.states[entity]:
            if valid_from <= at:
                current = graph
        return current

    def dataset_at(self, at: datetime) -> FrozenSet[Quad]:
        graphs = [self.entity_at(e, at) for e in self.states]
        return frozenset().union(*(g for g in graphs if g is not None))


def random_history(rng: random.Random, max_entities: int = 10, max_updates: int = 50) -> History:
    """
    Random creations and updates over a small shared vocabulary

    Commits of different entities sometimes share a timestamp, so dataset
    versions can bundle several snapshots.
    """
    history = History(VersionedStore(BASE))
    clock = START
    last: Dict[URIRef, datetime] = {}

    def tick(entity):
        nonlocal clock
        clock += timedelta(seconds=rng.choice((0, 0, 1, 60, 3600)))
        if entity in last and clock <= last[entity]:
            clock = last[entity] + timedelta(seconds=1)
        last[entity] = clock
        return clock

    entities = [entity_iri(i) for i in range(rng.randint(1, max_entities))]
    for entity in entities:
        triples = random_graph(rng)
        at = tick(entity)
        history.store.create_entity(entity, triples, meta(at, f'create {entity}'))
        history.states[entity] = [(at, lift(triples, entity))]

    for _ in range(rng.randint(0, max_updates)):
        entity = rng.choice(entities)
        head = history.states[entity][-1][1]
        target = lift(random_graph(rng, 0, 6), entity)
        delta = Delta(insertions=target - head, deletions=head - target)
        if delta.is_empty:
            continue
        at = tick(entity)
        history.store.update_entity(entity, delta, meta(at, f'update {entity}'))
        history.states[entity].append((at, target))
    return history


def random_query(rng: random.Random) -> BgpQuery:
    """One or two patterns mixing variables and constants from the shared vocabulary"""
    s, o, x = Variable('s'), Variable('o'), Variable('x')
    templates = (
        lambda: ((s, rng.choice(PREDICATES), o),),
        lambda: ((s, Variable('p'), rng.choice(OBJECTS)),),
        lambda: ((rng.choice(NODES), rng.choice(PREDICATES), o),),
        lambda: ((s, rng.choice(PREDICATES), o), (o, rng.choice(PREDICATES), x)),
        lambda: ((s, rng.choice(PREDICATES), o), (s, rng.choice(PREDICATES), x)),
        lambda: ((s, rng.choice(PREDICATES), rng.choice(OBJECTS)),),
    )
    return BgpQuery(rng.choice(templates)())


def naive_bgp(query: BgpQuery, statements) -> Set[tuple]:
    """Nested loops over a plain list of triples, no indexes"""
    triples = sorted({(q[0], q[1], q[2]) for q in statements}, key=str)
    variables = query.variables
    results = set()

    def walk(index: int, binding: dict):
        if index == len(query.patterns):
            results.add(tuple(binding[v] for v in variables))
            return
        for triple in triples:
            candidate = dict(binding)
            for term, value in zip(query.patterns[index], triple):
                if isinstance(term, Variable):
                    if term in candidate and candidate[term] != value:
                        break
                    candidate[term] = value
                elif term != value:
                    break
            else:
                walk(index + 1, candidate)

    walk(0, {})
    return results
