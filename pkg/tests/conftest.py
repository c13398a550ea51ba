import random

import pytest

from glyphforge import facets, fixtures, signs as sign_model
from glyphforge.codes import GlyphCode
from glyphforge.corpus import Corpus


@pytest.fixture(scope="session")
def df1():
    return fixtures.df1_catalog()


@pytest.fixture(scope="session")
def df1_index(df1):
    return facets.build_index(df1)


@pytest.fixture(scope="session")
def df1_schema():
    return fixtures.df1_schema()


@pytest.fixture
def df1_manifest(tmp_path, df1):
    return fixtures.write_manifest(df1, tmp_path / "df1.manifest.jsonl")


def linear_scan(catalog, state):
    """Oracle: filter the catalog with the same predicate the index answers."""
    area = catalog.facet_schema.area(state.area)
    choices = state.choice_map()
    hits = []
    for code, glyph in catalog.glyphs.items():
        if catalog.role_map[code.category].value != area.role:
            continue
        if all(glyph.facet_attrs.get(box) == opt for box, opt in choices.items()):
            hits.append(code)
    return sorted(hits)


def random_sign(rng: random.Random, codes: list[GlyphCode], max_placements: int = 10):
    sign = sign_model.new_sign(400, 400)
    for _ in range(rng.randint(0, max_placements)):
        sign, _ = sign_model.place(
            sign, rng.choice(codes), rng.randint(0, 400), rng.randint(0, 400)
        )
    return sign


def random_corpus(rng: random.Random, codes: list[GlyphCode], max_signs: int = 50):
    corpus = Corpus()
    for i in range(rng.randint(0, max_signs)):
        sign = random_sign(rng, codes)
        sign_id = f"sign-{i:04d}"
        corpus.signs[sign_id] = sign_model.Sign(
            canvas_width=sign.canvas_width,
            canvas_height=sign.canvas_height,
            placements=sign.placements,
            sign_id=sign_id,
            next_placement_id=sign.next_placement_id,
        )
    return corpus
