from pathlib import Path


def toy_corpus_path() -> Path:
    """Bundled 10-question corpus with five value profiles."""
    return Path(__file__).with_name("toy_corpus.jsonl")
