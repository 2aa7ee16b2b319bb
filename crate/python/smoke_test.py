"""Smoke test for the snp extension module.

Build it with `cargo build -p snp-python --features extension-module` and copy
target/debug/libsnp.so next to this file as snp.so (or put it on PYTHONPATH).
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

import snp

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def main():
    acyclic = snp.Sentence.parse((CORPUS / "lt_acyclic.snp").read_text())
    c = acyclic.classify()
    assert c["monotone"] and c["connected"] and not c["monadic"], c
    assert acyclic.check_asnp() == (True, None)

    sig = snp.Signature([("E", 2)])
    cycle = snp.Structure(sig, 3)
    for a, b in [(0, 1), (1, 2), (2, 0)]:
        cycle.insert("E", [a, b])
    path = snp.Structure(sig, 3)
    path.insert("E", [0, 1])
    path.insert("E", [1, 2])

    s = snp.Sentence.parse((CORPUS / "acyclic.snp").read_text())
    assert not s.satisfies(cycle)
    assert s.satisfies(path)
    assert s.expansion(path) is not None
    assert len(s.models(3)) == 10
    assert s.closure(2)["clean"]

    r = snp.Sentence.parse((CORPUS / "one_loop.snp").read_text())
    assert not r.classify()["connected"]
    assert r.rewrite_connected().classify()["connected"]
    assert len(r.split()) >= 2
    assert r.equivalent(r.rewrite_connected(), 3)

    def digraph(n, edges):
        g = snp.Structure(sig, n)
        for e in edges:
            g.insert("E", list(e))
        return g

    matchings = snp.ForbiddenFamily(sig, [
        digraph(1, [(0, 0)]),
        digraph(2, [(0, 1)]),
        digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)]),
        digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]),
    ])
    assert matchings.decide_ap()["holds"]
    strong = matchings.decide_ap(strong=True)
    assert not strong["holds"]
    b0, b1, b2 = strong["witness"]
    assert b1.size == b0.size + 1 and matchings.admits(b1) and matchings.admits(b2)

    try:
        snp.Sentence.parse("exists T/2. forall x. (T(x) -> false)")
    except ValueError as e:
        assert "1:" in str(e)
    else:
        raise AssertionError("bad arity accepted")

    print("ok")


if __name__ == "__main__":
    main()
