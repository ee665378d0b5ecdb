"""Builds data/corpus.smi: drug-like molecules assembled from ring systems,
linkers and substituents, plus a hand-picked set of known drugs, salts,
charged and stereo-bearing structures. Needs RDKit (development only)."""

import argparse
import random

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")

RINGS = [
    "c1ccccc1", "c1ccncc1", "c1cnccn1", "c1ccc2ccccc2c1", "c1ccc2[nH]ccc2c1",
    "c1ccoc1", "c1ccsc1", "c1cn[nH]c1", "c1cncnc1", "C1CCCCC1", "C1CCNCC1",
    "C1CCOCC1", "C1CNCCN1", "C1CCCC1", "C1CC1", "c1ccc2ncccc2c1", "c1ccc2occc2c1",
    "c1cscn1", "c1cocn1", "C1CCN(CC1)", "c1ccc2c(c1)OCO2", "C1COCCN1",
]
LINKERS = ["", "C", "CC", "O", "N", "C(=O)N", "NC(=O)", "C(=O)O", "OC", "S(=O)(=O)N", "CO", "CN", "C=C", "C#C", "NC(=O)N"]
SUBSTITUENTS = ["C", "CC", "F", "Cl", "Br", "O", "OC", "N", "N(C)C", "C(F)(F)F", "C#N", "C(=O)O", "C(=O)N", "[N+](=O)[O-]", "S(C)(=O)=O", "C(C)C", "OCC", "I"]
EXTRA = [
    "CC(=O)Oc1ccccc1C(=O)O", "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "CC(=O)Nc1ccc(O)cc1", "OC(=O)CCC(=O)O", "C[C@@H](N)C(=O)O", "N[C@@H](Cc1ccccc1)C(=O)O",
    "F/C=C/c1ccccc1", "C/C=C\\C(=O)O", "[Na+].[O-]C(=O)c1ccccc1", "[NH4+].[Cl-]", "C[N+](C)(C)C",
    "c1ccc2c(c1)ccc1ccccc12", "O=C1NC(=O)C(N1)(c1ccccc1)c1ccccc1", "CCN(CC)CCOC(=O)c1ccc(N)cc1",
    "CN1CCC[C@H]1c1cccnc1", "COc1ccc2[nH]cc(CCNC(C)=O)c2c1", "C1CC2CCC1C2", "C1CCC2(CC1)CCCC2",
    "[13CH4]", "[2H]C([2H])([2H])O", "O", "C", "CCO", "CC#N", "C=C", "ClCCl", "OCC(O)CO",
    "c1ccc(cc1)-c1ccccc1", "Cc1ccc(cc1)S(=O)(=O)N", "CC(C)(C)OC(=O)N", "[O-][n+]1ccccc1",
    "C1=CC=CC=C1", "B(O)(O)c1ccccc1", "P(=O)(O)(O)O", "CSC", "c1ccsc1-c1ccco1",
    "CC12CCC3C(CCC4CC(O)CCC34C)C1CCC2O", "O=C(O)C[C@H](O)C(=O)O", "C[Si](C)(C)C", "[Se]1C=CC=C1",
]


def assemble(rng):
    mol = rng.choice(RINGS)
    for _ in range(rng.randint(0, 2)):
        mol = combine(mol, rng.choice(LINKERS), rng.choice(RINGS), rng)
    for _ in range(rng.randint(0, 3)):
        mol = combine(mol, "", rng.choice(SUBSTITUENTS), rng)
    return mol


def combine(left, linker, right, rng):
    """Attaches `linker`+`right` to a random hydrogen-bearing atom of `left`."""
    a = Chem.MolFromSmiles(left)
    b = Chem.MolFromSmiles(linker + right) if linker or right else None
    if a is None or b is None:
        return left
    sites_a = [at.GetIdx() for at in a.GetAtoms() if at.GetTotalNumHs() > 0]
    sites_b = [at.GetIdx() for at in b.GetAtoms() if at.GetTotalNumHs() > 0]
    if not sites_a or not sites_b:
        return left
    ia, ib = rng.choice(sites_a), sites_b[0]
    combo = Chem.RWMol(Chem.CombineMols(a, b))
    combo.AddBond(ia, a.GetNumAtoms() + ib, Chem.BondType.SINGLE)
    for idx in (ia, a.GetNumAtoms() + ib):
        at = combo.GetAtomWithIdx(idx)
        if at.GetNumExplicitHs() > 0:
            at.SetNumExplicitHs(at.GetNumExplicitHs() - 1)
    try:
        m = combo.GetMol()
        Chem.SanitizeMol(m)
        return Chem.MolToSmiles(m)
    except Exception:
        return left


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="data/corpus.smi")
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=20240101)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    seen, out = set(), []
    for smi in EXTRA:
        m = Chem.MolFromSmiles(smi)
        can = Chem.MolToSmiles(m)
        if can not in seen:
            seen.add(can)
            out.append(can)
    while len(out) < args.n:
        m = Chem.MolFromSmiles(assemble(rng))
        if m is None or m.GetNumHeavyAtoms() > 45:
            continue
        can = Chem.MolToSmiles(m)
        if can not in seen:
            seen.add(can)
            out.append(can)
    with open(args.out, "w") as fh:
        fh.write("\n".join(out[: args.n]) + "\n")


if __name__ == "__main__":
    main()
