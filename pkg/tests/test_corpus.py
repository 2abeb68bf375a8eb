import numpy as np
import pytest

from sublcs.corpus import (LONG_SLICE, SHORT_GROUP, Corpus, CorpusError, DocSpan, Window, load_corpus,
                           resolve)


def test_flat_layout_and_sentinels():
    c = Corpus.from_docs([[0, 1], [], [2]], 2, sigma=3)
    assert c.S.tolist() == [0, 1, 3, 4, 2, 5]
    assert c.n == 3 and c.m == 3
    assert c.sentinel(2) == 4 and c.hash_symbol == 6
    assert not c.S.flags.writeable


def test_rejects_bad_input():
    with pytest.raises(CorpusError):
        Corpus.from_docs([[0]], 2)
    with pytest.raises(CorpusError):
        Corpus.from_docs([[0], [1]], 3)
    with pytest.raises(CorpusError):
        Corpus.from_docs([[5], [1]], 2, sigma=3)
    with pytest.raises(CorpusError):
        Corpus.from_docs([[-1], [1]], 2)


def test_load_two_files(tmp_path):
    (tmp_path / "a.txt").write_bytes(b"banana")
    (tmp_path / "b.txt").write_bytes(b"ananas")
    c = load_corpus([tmp_path / "a.txt", tmp_path / "b.txt"], 2)
    assert (c.m, c.n, c.sigma) == (2, 12, 256)
    assert bytes(c.doc(1).astype(np.uint8)) == b"banana"
    assert load_corpus([tmp_path], 2).n == 12


def test_load_delimited_stream():
    c = load_corpus([b"ab\x1fcd"], 2)
    assert [bytes(x.astype(np.uint8)) for x in c.docs] == [b"ab", b"cd"]


def test_load_decimal_tokens():
    c = load_corpus([b"3 1 4 | 1 5"], 2, alphabet="decimal")
    assert [x.tolist() for x in c.docs] == [[3, 1, 4], [1, 5]]
    assert c.sigma == 6
    with pytest.raises(CorpusError):
        load_corpus([b"3 x | 1"], 2, alphabet="decimal")


def test_resolve_slice():
    c = Corpus.from_docs([[0] * 20, [1] * 20], 2)
    w = Window(0, 2, 5, 8, c.sentinel(2), LONG_SLICE)
    assert resolve(c, w, 3, 4) == DocSpan(2, 7, 4)
    with pytest.raises(CorpusError):
        resolve(c, w, 6, 4)


def test_resolve_group():
    docs = [[0]] * 7
    docs[2] = [1, 2, 3]
    docs[6] = [4, 5]
    c = Corpus.from_docs(docs, 2)
    w = Window(0, 0, 1, 6, c.sentinel(7), SHORT_GROUP, (3, 7))
    assert resolve(c, w, 5, 2) == DocSpan(7, 1, 2)
    assert c.text(resolve(c, w, 2, 2)).tolist() == [2, 3]
    with pytest.raises(CorpusError):
        resolve(c, w, 3, 2)  # touches the sentinel of doc 3
    with pytest.raises(CorpusError):
        resolve(c, w, 4, 1)
