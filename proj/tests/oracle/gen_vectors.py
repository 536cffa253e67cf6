#!/usr/bin/env python3
"""Independent reference generator for the frozen test vectors.

Uses only third-party reference implementations (`cryptography` for Ed25519,
`py_ecc` for BLS12-381, `base58`, `hashlib`, `json`) and shares no code with
the C++ library. Run once; the outputs under tests/fixtures/ are committed and
asserted byte-exact by the C++ suites.

    pip install py_ecc base58 cryptography
    python3 tests/oracle/gen_vectors.py tests/fixtures
"""

import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import base58
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from py_ecc.bls import G2ProofOfPossession as Bls


def b58(raw: bytes) -> str:
    return base58.b58encode(raw).decode()


def ed25519_identity(seed: bytes):
    key = Ed25519PrivateKey.from_private_bytes(seed)
    raw = key.public_key().public_bytes(serialization.Encoding.Raw,
                                        serialization.PublicFormat.Raw)
    return {"did": b58(raw[:16]), "verkey": b58(raw)}


def bls_identity(seed: bytes):
    sk = Bls.KeyGen(seed)
    return {"bls_key": b58(Bls.SkToPk(sk)), "bls_pop": b58(Bls.PopProve(sk))}


def ascii_seed(label: str) -> bytes:
    seed = label.rjust(32, "0").encode()
    assert len(seed) == 32
    return seed


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def chain(txns):
    lines, prev = [], ""
    for seq_no, txn in enumerate(txns, start=1):
        txn_id = hashlib.sha256((prev + canonical(txn)).encode()).hexdigest()
        lines.append(canonical({
            "reqSignature": {},
            "txn": txn,
            "txnMetadata": {"seqNo": seq_no, "txnId": txn_id},
            "ver": "1",
        }) + "\n")
        prev = txn_id
    return "".join(lines)


def nym(record, role):
    return {"data": {"alias": record["name"], "dest": record["did"], "role": role,
                     "verkey": record["verkey"]},
            "metadata": {}, "type": "1"}


def node(steward):
    return {"data": {"data": {"alias": steward["alias"],
                              "blskey": steward["bls_key"],
                              "blskey_pop": steward["bls_pop"],
                              "client_ip": steward["client_ip"],
                              "client_port": steward["client_port"],
                              "node_ip": steward["node_ip"],
                              "node_port": steward["node_port"],
                              "services": ["VALIDATOR"]},
                     "dest": steward["node_verkey"]},
            "metadata": {"from": steward["did"]}, "type": "0"}


def steward_row(k: int):
    ident = ed25519_identity(ascii_seed(f"Steward{k}"))
    node_seed = ascii_seed(f"Node{k}")
    node_ident = ed25519_identity(node_seed)
    return {
        "name": f"Steward{k}", "did": ident["did"], "verkey": ident["verkey"],
        "alias": f"Node{k}", "node_ip": f"10.0.0.{k + 1}", "node_port": 9701,
        "client_ip": f"10.0.0.{k + 1}", "client_port": 9702,
        "node_verkey": node_ident["verkey"], **bls_identity(node_seed),
    }


STEWARD_COLUMNS = ["name", "did", "verkey", "alias", "node_ip", "node_port",
                   "client_ip", "client_port", "node_verkey", "bls_key", "bls_pop"]


def write_csv(path: Path, columns, rows, header=True):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    path.write_text(buf.getvalue())


def main(out: Path):
    out.mkdir(parents=True, exist_ok=True)

    # Ed25519 + DID vectors: the well-known Steward1 seed plus 19 hashed seeds.
    seeds = [b"000000000000000000000000Steward1"]
    seeds += [hashlib.sha256(f"indyforge-ed25519-vector-{i}".encode()).digest()
              for i in range(19)]
    ed_vectors = [{"seed_hex": s.hex(), **ed25519_identity(s)} for s in seeds]
    (out / "ed25519_vectors.json").write_text(json.dumps(ed_vectors, indent=1) + "\n")

    # BLS golden vectors and a cross-check of mismatched pairs.
    bls_vectors = []
    for byte in (0x01, 0x02, 0x03):
        seed = bytes([byte]) * 32
        bls_vectors.append({"seed_hex": seed.hex(), **bls_identity(seed)})
    a, b = bls_vectors[1], bls_vectors[2]
    cross = Bls.PopVerify(base58.b58decode(a["bls_key"]), base58.b58decode(b["bls_pop"]))
    honest = Bls.PopVerify(base58.b58decode(a["bls_key"]), base58.b58decode(a["bls_pop"]))
    assert honest and not cross
    (out / "bls_vectors.json").write_text(json.dumps(
        {"vectors": bls_vectors,
         "cross_check": {"key_of": a["seed_hex"], "pop_of": b["seed_hex"], "valid": cross}},
        indent=1) + "\n")

    # Fixture roster: 3 trustees, 4 stewards with one validator each.
    trustees = []
    for k in range(1, 4):
        ident = ed25519_identity(ascii_seed(f"Trustee{k}"))
        trustees.append({"name": f"Trustee{k}", **ident})
    stewards = [steward_row(k) for k in range(1, 5)]
    write_csv(out / "trustees.csv", ["name", "did", "verkey"], trustees)
    write_csv(out / "stewards.csv", STEWARD_COLUMNS, stewards)
    # A fifth steward used by the node-addition scenarios (header-less row).
    write_csv(out / "steward5_row.csv", STEWARD_COLUMNS, [steward_row(5)], header=False)

    domain_txns = [nym(t, "0") for t in trustees] + [nym(s, "2") for s in stewards]
    pool_txns = [node(s) for s in stewards]
    (out / "domain_transactions_genesis").write_text(chain(domain_txns))
    pool_text = chain(pool_txns)
    (out / "pool_transactions_genesis").write_text(pool_text)

    # Tampered pool file: node_ip of seqNo 3 edited, txnIds left as they were.
    lines = pool_text.splitlines(keepends=True)
    assert '"node_ip":"10.0.0.4"' in lines[2]
    lines[2] = lines[2].replace('"node_ip":"10.0.0.4"', '"node_ip":"10.0.0.9"')
    tampered = json.loads(lines[2])
    prev = json.loads(lines[1])["txnMetadata"]["txnId"]
    recomputed = hashlib.sha256((prev + canonical(tampered["txn"])).encode()).hexdigest()
    assert recomputed != tampered["txnMetadata"]["txnId"]
    (out / "pool_transactions_genesis.tampered_seq3").write_text("".join(lines))

    seed_list = {"trustees": [ascii_seed(f"Trustee{k}").decode() for k in range(1, 4)],
                 "stewards": [ascii_seed(f"Steward{k}").decode() for k in range(1, 6)],
                 "nodes": [ascii_seed(f"Node{k}").decode() for k in range(1, 6)]}
    (out / "fixture_seeds.json").write_text(json.dumps(seed_list, indent=1) + "\n")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures"))
