"""Smoke-test the full fit -> assemble / transform_matrix flow."""

from __future__ import annotations

import numpy as np

from argquality.corpus import Argument
from argquality.features import (
    CorpusIndex,
    ExtractorConfig,
    assemble,
    fit,
    load_resources,
    transform_matrix,
)
from argquality.textproc import analyze

TEXTS = [
    "School uniforms should be mandatory. First, they reduce bullying. "
    "Second, studies show they improve focus. Therefore we must adopt them.",
    "I disagree with uniforms because they limit expression. Students "
    "deserve freedom. For example, clothing is identity.",
    "Uniforms are great! They are cheap. They are simple. All in all, a "
    "good idea since they save money.",
    "this is a badly written argument with no capitalization and and "
    "repeated words. it proves nothing.",
    "The evidence shows that uniforms help. According to research, "
    "outcomes improve. Thus schools should adopt them. http://example.org",
    "Why force children into identical clothes? It seems wrong. Perhaps "
    "we could allow choice instead. :)",
]


def make_args():
    out = []
    for i, text in enumerate(TEXTS):
        out.append(Argument(id=f"arg{i:02d}", topic="uniforms", text=text,
                            scores={}))
    return out


def main():
    config = ExtractorConfig()
    resources = load_resources(config)
    arguments = make_args()
    analyses = {a.id: analyze(a.text) for a in arguments}

    index = CorpusIndex.build(arguments, config, resources, analyses)
    train = arguments[:4]
    pipeline = fit(config, train, index=index, keep_train_matrix=True)
    print("families:", pipeline.enabled_families)
    print("n features:", len(pipeline.feature_names))
    for fam, sl in pipeline.family_slices.items():
        print(f"  {fam}: {sl.stop - sl.start}")
    print("fingerprint:", pipeline.fingerprint[:16])

    # fit without the index must agree bit for bit
    direct = fit(config, train, resources=resources,
                 analyses={a.id: analyses[a.id] for a in train})
    assert direct.serialize() == pipeline.serialize(), "index/direct mismatch"
    assert direct.fingerprint == pipeline.fingerprint

    rows = index.rows_for([a.id for a in arguments])
    matrix = transform_matrix(pipeline, index, rows)
    assert matrix.shape == (6, len(pipeline.feature_names))

    train_rows = index.rows_for([a.id for a in train])
    again = transform_matrix(pipeline, index, train_rows)
    assert np.array_equal(pipeline.train_matrix, again), "train matrix drift"

    for i, argument in enumerate(arguments):
        vector = assemble(analyses[argument.id], pipeline)
        stacked = np.array([vector[name] for name in pipeline.feature_names])
        err = np.max(np.abs(stacked - matrix[i]))
        assert err < 1e-12, (argument.id, err)
    print("assemble == transform_matrix on all", len(arguments), "documents")

    sub = transform_matrix(pipeline, index, rows, families=["length", "style"])
    names = (pipeline.family_feature_names("style")
             + pipeline.family_feature_names("length"))
    assert sub.shape[1] == len(names)
    vec = assemble(analyses[arguments[5].id], pipeline,
                   families=["style", "length"])
    stacked = np.array([vec[n] for n in names])
    assert np.max(np.abs(stacked - sub[5])) < 1e-12
    print("family subsets consistent (canonical order enforced)")

    means = pipeline.train_matrix.mean(axis=0)
    stds = pipeline.train_matrix.std(axis=0)
    assert np.max(np.abs(means)) < 1e-12
    nonconst = stds > 1e-12
    assert np.allclose(stds[nonconst], 1.0)
    print("standardization: train mean 0, train std 1 (non-constant cols)")
    print("OK")


if __name__ == "__main__":
    main()
