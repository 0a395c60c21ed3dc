"""Corpus loading, gold scores, and topic-wise split checks."""

from __future__ import annotations

import csv
import itertools
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from argquality.corpus import (
    DIMENSION_GROUPS,
    DIMENSIONS,
    EXPERTS,
    Argument,
    ColumnMapping,
    Corpus,
    QualityDimension,
    SchemaError,
    ValidationError,
    build_corpus,
    corpus_fingerprint,
    dump_jsonl,
    inner_cv_splits,
    load_corpus,
    load_jsonl,
    loto_splits,
    majority_score,
    mean_score,
)


def make_argument(arg_id, topic, triple=(2, 2, 2), text="Some text here."):
    return Argument(arg_id, topic, text, {d: triple for d in DIMENSIONS})


def make_corpus(topic_sizes: dict[str, int]) -> Corpus:
    arguments = []
    for topic, size in topic_sizes.items():
        for i in range(size):
            arguments.append(make_argument(f"{topic}-{i:02d}", topic))
    return build_corpus(arguments)


def write_corpus_file(path, rows, delimiter=",", extra_columns=()):
    columns = ["id", "topic", "text", *extra_columns]
    columns += [f"{d.value}:{e}" for d in DIMENSIONS for e in EXPERTS]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns, delimiter=delimiter)
        writer.writeheader()
        writer.writerows(rows)


def make_row(arg_id, topic="t1", text="Words.", triple=(1, 2, 3), **extra):
    row = {"id": arg_id, "topic": topic, "text": text, **extra}
    for d in DIMENSIONS:
        for e in EXPERTS:
            row[f"{d.value}:{e}"] = triple[e - 1]
    return row


def test_dimension_inventory():
    assert len(DIMENSIONS) == 15
    assert [d.value for d in DIMENSIONS] == [
        "Cog", "LAc", "LRe", "LSu", "Eff", "Cla", "Cre", "App", "Emo",
        "Arr", "Rea", "GAc", "GRe", "GSu", "OvQ"]
    assert [len(group) for _, group in DIMENSION_GROUPS] == [4, 6, 4, 1]
    assert DIMENSIONS[-1] is QualityDimension.OVERALL


def test_mean_score_examples():
    assert mean_score(make_argument("a", "t", (1, 2, 3)), DIMENSIONS[0]) == 2.0
    assert mean_score(make_argument("a", "t", (2, 2, 2)), DIMENSIONS[0]) == 2.0
    assert mean_score(make_argument("a", "t", (1, 1, 2)),
                      DIMENSIONS[0]) == pytest.approx(4 / 3)


def test_majority_score_examples():
    assert majority_score(make_argument("a", "t", (2, 2, 3)), DIMENSIONS[0]) == 2
    assert majority_score(make_argument("a", "t", (3, 3, 3)), DIMENSIONS[0]) == 3
    assert majority_score(make_argument("a", "t", (1, 2, 3)), DIMENSIONS[0]) == 2


def test_majority_score_equals_mode_over_all_triples():
    for triple in itertools.product((1, 2, 3), repeat=3):
        got = majority_score(make_argument("a", "t", triple), DIMENSIONS[0])
        counts = Counter(triple)
        top, top_count = counts.most_common(1)[0]
        if top_count >= 2:
            assert got == top
        else:
            assert got == sorted(triple)[1] == 2


def test_argument_score_accessor():
    argument = make_argument("a", "t", (1, 2, 3))
    assert [argument.score(DIMENSIONS[3], e) for e in EXPERTS] == [1, 2, 3]


def test_build_corpus_sorts_and_validates():
    corpus = build_corpus([make_argument("b", "t2"), make_argument("a", "t1")])
    assert [a.id for a in corpus] == ["a", "b"]
    assert corpus.topics == ("t1", "t2")
    assert len(corpus) == 2
    assert corpus.by_id["a"].topic == "t1"
    with pytest.raises(ValidationError):
        build_corpus([make_argument("a", "t"), make_argument("a", "t")])
    with pytest.raises(ValidationError):
        build_corpus([])
    with pytest.raises(ValidationError):
        partial = Argument("a", "t", "x", {DIMENSIONS[0]: (1, 1, 1)})
        build_corpus([partial])


def test_loto_splits_examples():
    corpus = make_corpus({"ta": 2, "tb": 2})
    folds = loto_splits(corpus)
    assert [f.held_out_topic for f in folds] == ["ta", "tb"]
    assert all(len(f.test) == 2 for f in folds)
    assert all(len(f.train) == 2 for f in folds)
    with pytest.raises(ValidationError):
        loto_splits(make_corpus({"only": 3}))


def test_loto_topic_purity():
    corpus = make_corpus({"ta": 3, "tb": 2, "tc": 4})
    for fold in loto_splits(corpus):
        train_topics = {corpus.by_id[i].topic for i in fold.train}
        test_topics = {corpus.by_id[i].topic for i in fold.test}
        assert fold.held_out_topic not in train_topics
        assert test_topics == {fold.held_out_topic}
        assert not set(fold.train) & set(fold.test)
        assert sorted(fold.train + fold.test) == [a.id for a in corpus]


def test_inner_cv_splits_examples():
    corpus = make_corpus({"ta": 1, "tb": 1, "tc": 1})
    folds = inner_cv_splits([a.id for a in corpus], corpus)
    assert len(folds) == 3
    assert all(len(f.test) == 1 for f in folds)

    fifteen = make_corpus({f"t{i:02d}": 1 for i in range(15)})
    assert len(inner_cv_splits([a.id for a in fifteen], fifteen)) == 15

    with pytest.raises(ValidationError):
        inner_cv_splits([a.id for a in corpus if a.topic == "ta"], corpus)


def test_inner_cv_partitions_the_training_set():
    corpus = make_corpus({"ta": 2, "tb": 3, "tc": 1, "td": 2})
    outer = loto_splits(corpus)[0]
    folds = inner_cv_splits(outer.train, corpus)
    seen = []
    for fold in folds:
        assert not set(fold.train) & set(fold.test)
        assert sorted(fold.train + fold.test) == sorted(outer.train)
        seen.extend(fold.test)
    assert sorted(seen) == sorted(outer.train)


@given(st.dictionaries(st.sampled_from("abcdefgh"),
                       st.integers(min_value=1, max_value=4),
                       min_size=2, max_size=8))
def test_loto_partition_property(topic_sizes):
    corpus = make_corpus(topic_sizes)
    folds = loto_splits(corpus)
    assert len(folds) == len(topic_sizes)
    covered = []
    for fold in folds:
        covered.extend(fold.test)
    assert sorted(covered) == [a.id for a in corpus]


def test_load_corpus_csv_and_tsv(tmp_path):
    mapping = ColumnMapping.from_template()
    rows = [make_row("a2", "t1"), make_row("a1", "t2", triple=(2, 2, 2))]
    for name, delimiter in (("c.csv", ","), ("c.tsv", "\t")):
        path = tmp_path / name
        write_corpus_file(path, rows, delimiter=delimiter)
        corpus = load_corpus(path, mapping)
        assert [a.id for a in corpus] == ["a1", "a2"]
        assert corpus.by_id["a2"].score(DIMENSIONS[0], 3) == 3


def test_load_corpus_accepts_integer_valued_floats(tmp_path):
    path = tmp_path / "c.csv"
    row = make_row("a1")
    row[f"{DIMENSIONS[0].value}:1"] = "2.0"
    write_corpus_file(path, [row])
    corpus = load_corpus(path, ColumnMapping.from_template())
    assert corpus.by_id["a1"].score(DIMENSIONS[0], 1) == 2


def test_load_corpus_missing_column_is_named(tmp_path):
    path = tmp_path / "c.csv"
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("id,topic,text\n")
        handle.write("a1,t1,hello\n")
    with pytest.raises(SchemaError) as excinfo:
        load_corpus(path, ColumnMapping.from_template())
    assert "Cog:1" in str(excinfo.value)


def test_load_corpus_bad_scores_name_the_row(tmp_path):
    for bad in ("4", "0", "1.5", "x"):
        path = tmp_path / "c.csv"
        row = make_row("a9")
        row[f"{DIMENSIONS[1].value}:2"] = bad
        write_corpus_file(path, [row])
        with pytest.raises(ValidationError) as excinfo:
            load_corpus(path, ColumnMapping.from_template())
        assert "a9" in str(excinfo.value)


def test_load_corpus_rejects_blank_fields(tmp_path):
    for field_name in ("id", "topic", "text"):
        path = tmp_path / "c.csv"
        row = make_row("a1")
        row[field_name] = "  "
        write_corpus_file(path, [row])
        with pytest.raises(ValidationError):
            load_corpus(path, ColumnMapping.from_template())


def test_load_corpus_filter_column(tmp_path):
    path = tmp_path / "c.csv"
    rows = [make_row("a1", usable="yes"), make_row("a2", usable="no"),
            make_row("a3", usable="yes")]
    write_corpus_file(path, rows, extra_columns=("usable",))
    mapping = ColumnMapping.from_template(filter_column="usable",
                                          filter_value="yes")
    corpus = load_corpus(path, mapping)
    assert [a.id for a in corpus] == ["a1", "a3"]
    unfiltered = load_corpus(path, ColumnMapping.from_template())
    assert len(unfiltered) == 3


def test_load_corpus_missing_file():
    with pytest.raises(SchemaError):
        load_corpus("/nonexistent/corpus.csv", ColumnMapping.from_template())


def test_jsonl_round_trip(tmp_path):
    corpus = make_corpus({"ta": 2, "tb": 1})
    path = tmp_path / "dump.jsonl"
    dump_jsonl(corpus, path)
    reloaded = load_jsonl(path)
    assert reloaded == corpus
    assert corpus_fingerprint(reloaded) == corpus_fingerprint(corpus)


def test_jsonl_round_trip_preserves_unicode_text(tmp_path):
    argument = make_argument("a1", "t1", text="Café — naïve 「apt」")
    other = make_argument("a2", "t2")
    corpus = build_corpus([argument, other])
    path = tmp_path / "dump.jsonl"
    dump_jsonl(corpus, path)
    assert load_jsonl(path).by_id["a1"].text == argument.text


def test_fingerprint_tracks_content():
    base = make_corpus({"ta": 2})
    changed = build_corpus([make_argument("ta-00", "ta", text="Different."),
                            make_argument("ta-01", "ta")])
    assert corpus_fingerprint(base) != corpus_fingerprint(changed)
    assert corpus_fingerprint(base) == corpus_fingerprint(make_corpus({"ta": 2}))


def test_score_columns_cover_all_pairs():
    mapping = ColumnMapping.from_template(score_template="s_{dim}_{expert}")
    assert len(mapping.score_columns) == 45
    assert mapping.score_columns[(QualityDimension.OVERALL, 3)] == "s_OvQ_3"
