import numpy as np
import pytest

from readgrade import data_path
from readgrade.corpus import load_pron_dict, load_word_list
from readgrade.features import FeatureVector
from readgrade.synthesis import SynthConfig, generate_corpus


@pytest.fixture(scope="session")
def pron_dict():
    return load_pron_dict(data_path("prondict.tsv"))


@pytest.fixture(scope="session")
def pronouns():
    return load_word_list(data_path("pronouns.txt"))


@pytest.fixture(scope="session")
def stop_words():
    return load_word_list(data_path("stopwords.txt"))


@pytest.fixture(scope="session")
def small_corpus_dir(tmp_path_factory):
    """A small but complete synthetic corpus shared across CLI/service tests."""
    root = tmp_path_factory.mktemp("corpus")
    generate_corpus(root, SynthConfig(docs_per_grade=12, seed=5))
    return root


@pytest.fixture(scope="session")
def textonly_corpus_dir(tmp_path_factory):
    """Synthetic corpus without tree sidecars (text-only models)."""
    root = tmp_path_factory.mktemp("corpus_notree")
    generate_corpus(root, SynthConfig(docs_per_grade=12, seed=5, tree_fraction=0.0))
    return root


def make_rows(X: np.ndarray, y: np.ndarray, names=None) -> list[FeatureVector]:
    """Wrap numeric arrays as feature vectors for model-layer tests."""
    n, k = X.shape
    names = tuple(names) if names else tuple(f"x{i}" for i in range(k))
    return [
        FeatureVector(
            doc_id=f"row{i}",
            names=names,
            values=tuple(float(v) for v in X[i]),
            missing=(False,) * k,
            grade=float(y[i]),
        )
        for i in range(n)
    ]
