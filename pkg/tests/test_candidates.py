import pytest
from hypothesis import given, strategies as st

from adfit.candidates import (
    AnnotationError,
    collect_protected_phrases,
    cut_count_of,
    droppable_units,
    generate_candidates,
)
from adfit.model import DraftDescription, Project

from conftest import (
    beach_description,
    bench_description,
    fixture_project,
    food_description,
    onscreen_description,
    zoom_description,
    w,
)

GLOSSARY = ["zoom", "close up", "cut to", "pan"]
STOPWORDS = ["a", "an", "and", "the", "with", "of", "on", "in"]


def protected_for(desc, project=None, glossary=GLOSSARY, stopwords=STOPWORDS):
    project = project or fixture_project()
    return collect_protected_phrases(desc, project, glossary, stopwords)


def brute_force_candidates(desc, units):
    """Independent oracle: every keep-subset of the words whose dropped
    complement is exactly a union of drop units."""
    n = len(desc.words)
    spans = [set(u.indices) for u in units]
    legal = set()
    for mask in range(2 ** n):
        kept = tuple(i for i in range(n) if mask & (1 << i))
        dropped = set(range(n)) - set(kept)
        union = set()
        for s in spans:
            if s <= dropped:
                union |= s
        if union != dropped:
            continue
        if not any(not desc.words[i].is_punct for i in kept):
            continue
        legal.add(kept)
    return legal


class TestProtectedPhrases:
    def test_film_phrase_extends_over_prepositions(self):
        desc = zoom_description()
        out = protected_for(desc)
        assert ("zoom", "in", "on") in out.film_phrases
        assert (1, 4) in out.film_spans

    def test_video_phrase_requires_three_occurrences(self):
        words = tuple(
            [w("A", "DET", 3, "det"), w("big", "ADJ", 3, "amod"),
             w("red", "ADJ", 3, "amod"), w("dog", "NOUN", 3, "ROOT"),
             w("runs", "VERB", 3, "acl")]
        )
        desc = DraftDescription(id="dv", anchor_time=1.0, words=words)
        transcript = tuple(
            w(t, pos=p, start=0.1 + i * 0.2, end=0.2 + i * 0.2)
            for i, (t, p) in enumerate(
                [("the", "DET"), ("big", "ADJ"), ("red", "ADJ"), ("dog", "NOUN"),
                 ("saw", "VERB"), ("a", "DET"), ("big", "ADJ"), ("red", "ADJ"),
                 ("dog", "NOUN"), (".", "PUNCT")]
            )
        )
        from adfit.model import SPEECH, AudioLabelSegment

        project = Project(
            source_duration=10.0,
            transcript=transcript,
            labels=(AudioLabelSegment(0, 10, SPEECH),),
            descriptions=(desc,),
        )
        out = collect_protected_phrases(desc, project, GLOSSARY, STOPWORDS)
        assert ("big", "red", "dog") in out.video_phrases
        assert (1, 4) in out.video_spans

    def test_video_phrase_blocked_by_stopword_or_count(self, project):
        desc = food_description()
        out = protected_for(desc, project)
        assert out.video_phrases == set()  # "tater tots" occurs only once

    def test_onscreen_span(self):
        desc = onscreen_description()
        out = protected_for(desc)
        assert out.onscreen_spans == [(1, 8)]
        span = out.onscreen_spans[0]
        covered = " ".join(t.text for t in desc.words[span[0]:span[1]])
        assert "Welcome back" in covered

    def test_quoted_span(self):
        desc = onscreen_description()
        out = protected_for(desc)
        assert out.quoted_spans == [(4, 8)]

    def test_unbalanced_quote_diagnostic(self):
        words = (
            w('"', "PUNCT", 1, "punct"),
            w("Hello", "PROPN", 1, "ROOT"),
            w("there", "ADV", 1, "advmod"),
        )
        desc = DraftDescription(id="dq", anchor_time=1.0, words=words)
        out = protected_for(desc)
        assert out.quoted_spans == []
        assert any(d.code == "unbalanced-quotes" for d in out.diagnostics)


class TestDroppableUnits:
    def test_bench_three_units(self):
        desc = bench_description()
        units = droppable_units(desc, protected_for(desc))
        spans = {(u.start, u.end, u.kind) for u in units}
        assert spans == {
            (1, 2, "adjective"),
            (4, 5, "adjective"),
            (3, 6, "prepositional_phrase"),
        }

    def test_no_units(self):
        words = (
            w("A", "DET", 2, "det"),
            w("dog", "NOUN", 2, "nsubj"),
            w("runs", "VERB", 2, "ROOT"),
        )
        desc = DraftDescription(id="dd", anchor_time=1.0, words=words)
        assert droppable_units(desc, protected_for(desc)) == []

    def test_beach_units_cover_paper_drop_sites(self):
        desc = beach_description()
        units = droppable_units(desc, protected_for(desc))
        spans = {(u.start, u.end) for u in units}
        assert (5, 16) in spans  # "with ... water"
        assert (10, 16) in spans  # "and white sand below turquoise water"
        assert {(7, 8), (11, 12), (14, 15)} <= spans  # the adjectives

    def test_missing_annotations(self):
        desc = DraftDescription(id="dx", anchor_time=1.0, words=(w("hello"),))
        with pytest.raises(AnnotationError, match="dx"):
            droppable_units(desc, protected_for(desc))

    def test_protected_units_excluded(self):
        desc = zoom_description()
        units = droppable_units(desc, protected_for(desc))
        # "in" and "on" head PP subtrees but sit in the film phrase
        assert all(not (u.start < 4 and u.end > 1) for u in units)


class TestGenerateCandidates:
    def test_paper_beach_candidates_present(self):
        desc = beach_description()
        units = droppable_units(desc, protected_for(desc))
        texts = {c.text for c in generate_candidates(desc, units)}
        assert "People walking along a beach with white sand ." in texts
        assert "People walking along a beach ." in texts
        assert "People walking along a beach with an overcast sky above ." in texts
        assert desc.text in texts

    def test_lock_text(self):
        desc = beach_description(lock_text=True)
        units = droppable_units(desc, protected_for(desc))
        out = generate_candidates(desc, units)
        assert len(out) == 1 and out[0].text == desc.text

    def test_bench_cut_counts(self):
        desc = bench_description()
        units = droppable_units(desc, protected_for(desc))
        by_text = {c.text: c for c in generate_candidates(desc, units)}
        assert by_text["A bench with birds"].cut_count == 4
        assert by_text["A long bench"].cut_count == 1
        assert by_text["A long bench"].drops_last_word
        assert not by_text["A bench with birds"].drops_last_word

    def test_original_always_member_and_ordering(self):
        desc = beach_description()
        units = droppable_units(desc, protected_for(desc))
        out = generate_candidates(desc, units)
        durations = [c.duration for c in out]
        assert durations == sorted(durations), "slider order is duration-ascending"
        assert tuple(range(len(desc.words))) in {c.kept_indices for c in out}

    def test_cap_keeps_shortest_plus_original(self):
        desc = beach_description()
        units = droppable_units(desc, protected_for(desc))
        out = generate_candidates(desc, units, cap=4)
        full = tuple(range(len(desc.words)))
        assert len(out) <= 5
        assert full in {c.kept_indices for c in out}
        uncapped = generate_candidates(desc, units)
        shortest = sorted(uncapped, key=lambda c: (round(c.duration * 1000), len(c.kept_indices), c.kept_indices))[:4]
        assert {c.kept_indices for c in shortest} <= {c.kept_indices for c in out}

    @pytest.mark.parametrize(
        "desc_builder",
        [bench_description, food_description, onscreen_description, zoom_description],
    )
    def test_matches_brute_force_enumeration(self, desc_builder):
        desc = desc_builder()
        assert len(desc.words) <= 12
        protected = protected_for(desc)
        units = droppable_units(desc, protected)
        got = {c.kept_indices for c in generate_candidates(desc, units, cap=10_000)}
        assert got == brute_force_candidates(desc, units)

    def test_no_candidate_splits_protected_span(self):
        for builder in (zoom_description, onscreen_description, food_description):
            desc = builder()
            protected = protected_for(desc)
            units = droppable_units(desc, protected)
            for c in generate_candidates(desc, units):
                kept = set(c.kept_indices)
                for ps, pe in protected.spans:
                    inside = set(range(ps, pe))
                    assert inside <= kept or inside.isdisjoint(kept)

    def test_texts_are_subsequences(self):
        desc = beach_description()
        units = droppable_units(desc, protected_for(desc))
        for c in generate_candidates(desc, units):
            assert list(c.kept_indices) == sorted(set(c.kept_indices))
            assert c.text == " ".join(desc.words[i].text for i in c.kept_indices)


class TestCutCount:
    @given(st.integers(min_value=1, max_value=15), st.data())
    def test_matches_transition_walk(self, n, data):
        kept = sorted(
            data.draw(st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1))
        )
        mask = [i in kept for i in range(n)]
        oracle = sum(1 for a, b in zip(mask, mask[1:]) if a != b)
        assert cut_count_of(kept, n) == oracle

    def test_full_keep_is_zero(self):
        assert cut_count_of(range(6), 6) == 0
