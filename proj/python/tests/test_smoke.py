import pytest

import safe_notation as sn


def test_encode_decode():
    r = sn.encode("CCc1ccccc1")
    assert r["safe"] == "c12ccccc1.C2C"
    assert r["n_fragments"] == 2
    assert r["first_attachment_digit"] == 2
    assert sn.decode(r["safe"]) == sn.canonical_smiles("CCc1ccccc1")


def test_block_order_does_not_matter():
    text = sn.encode("CC(=O)Nc1ccccc1")["safe"]
    for seed in range(5):
        shuffled = sn.randomize_safe(text, seed, reroot=True)
        assert sn.decode(shuffled) == sn.decode(text)
        assert sn.canonical_safe(shuffled) == text


def test_errors():
    with pytest.raises(sn.SafeError, match="OpenAttachment"):
        sn.decode("C1CC1.C2C")
    with pytest.raises(ValueError):
        sn.encode("C1CC")


def test_fragments_and_tokens():
    assert sn.fragments("c12ccccc1.C2C") == sn.fragments("C2C.c12ccccc1")[::-1]
    assert "".join(sn.pretokenize("c12ccccc1.C2C")) == "c12ccccc1.C2C"
    assert sn.pretokenize("C%10CC%10") == ["C", "%10", "C", "C", "%10"]


def test_prompt_sample_verify():
    texts = [sn.encode(s)["safe"] for s in ["CCc1ccccc1", "Oc1ccc(C)cc1", "CC(=O)Nc1ccccc1", "Clc1ccc(CC)cc1"] * 5]
    vocab = sn.Vocabulary.train(texts, 40)
    assert vocab.decode(vocab.encode(texts[0])) == texts[0]
    model = sn.NGramModel.train(texts, vocab, 3)
    prompt = sn.make_prompt("decorate", ["*c1ccc(*)cc1"])
    assert prompt.prefix == "c12ccc3cc1."
    samples = model.sample(prompt, n=20, seed=1, max_len=32)
    assert len(samples) == 20
    assert samples == model.sample(prompt, n=20, seed=1, max_len=32)
    for text, accepted, reason in samples:
        assert text.startswith(prompt.prefix)
        assert prompt.verify(text) == (accepted, reason)
    assert any(accepted for _, accepted, _ in samples)


def test_metrics_and_reward():
    m = sn.evaluate(["C", "C"])
    assert (m["validity"], m["uniqueness"], m["diversity"]) == (1.0, 0.5, 0.0)
    assert m["distance_to_reference"] is None
    assert sn.evaluate(["C", "not_a_molecule"])["validity"] == 0.5
    mw = sn.molecular_weight("CCO")
    assert sn.property_reward("CCO", mw) == 1.0
    assert sn.property_reward("CCO", mw + 2.0) == pytest.approx(0.5, abs=1e-12)


def test_convert_file(tmp_path):
    src = tmp_path / "in.smi"
    src.write_text("C\nCCO\nCCc1ccccc1\n")
    out = tmp_path / "out.safe"
    stats = sn.convert_file(str(src), str(out), threads=2)
    assert stats["n_ok"] == 3 and stats["passed"]
    assert out.read_text().splitlines()[-1] == "c12ccccc1.C2C"
