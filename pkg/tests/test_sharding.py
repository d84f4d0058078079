import random

import pytest

from blrc.analysis import minimal_repair
from blrc.code import UndecodableError, encode
from blrc.gf import FieldSpec
from blrc.sharding import (
    ShardError,
    ShardHeader,
    decode_stream,
    encode_stream,
    read_shard,
    repair_stream,
    shard_path,
    write_shard,
)


def test_encode_decode_round_trip_full(code_15_10):
    data = bytes(range(256)) * 5 + b"tail"
    shards = encode_stream(code_15_10, data)
    assert len(shards) == 15
    full = {i + 1: s for i, s in enumerate(shards)}
    assert decode_stream(code_15_10, full, len(data)) == data


def test_encode_is_deterministic(code_15_10):
    data = b"determinism check" * 33
    assert encode_stream(code_15_10, data) == encode_stream(code_15_10, data)


def test_padding_and_exact_length(code_15_10):
    for size in (0, 1, 9, 10, 11, 137):
        data = bytes((i * 7) % 256 for i in range(size))
        shards = encode_stream(code_15_10, data)
        full = {i + 1: s for i, s in enumerate(shards)}
        assert decode_stream(code_15_10, full, size) == data


def test_shards_agree_with_symbol_encoding(code_15_10):
    rng = random.Random(1)
    data = bytes(rng.randrange(256) for _ in range(30))
    shards = encode_stream(code_15_10, data)
    for stripe in range(3):
        symbols = list(data[stripe * 10 : (stripe + 1) * 10])
        cw = encode(code_15_10, symbols)
        assert [shards[b][stripe] for b in range(15)] == cw


def test_decode_with_missing_shards(code_15_10):
    rng = random.Random(2)
    data = bytes(rng.randrange(256) for _ in range(997))
    shards = encode_stream(code_15_10, data)
    available = {i + 1: s for i, s in enumerate(shards)}
    for erased in [(1, 2, 3), (1, 11, 15), (9, 10, 12)]:
        partial = {b: v for b, v in available.items() if b not in erased}
        assert decode_stream(code_15_10, partial, len(data)) == data


def test_decode_undecodable_pattern_raises(code_15_10):
    from blrc.code import support_of

    data = b"x" * 100
    shards = encode_stream(code_15_10, data)
    cols = support_of(code_15_10.P)[0]
    erased = set([1] + [11 + j for j in cols])
    partial = {
        i + 1: s for i, s in enumerate(shards) if (i + 1) not in erased
    }
    with pytest.raises(UndecodableError):
        decode_stream(code_15_10, partial, len(data))


def test_repair_stream_matches_original(code_15_10):
    rng = random.Random(3)
    data = bytes(rng.randrange(256) for _ in range(500))
    shards = encode_stream(code_15_10, data)
    for target in (1, 7, 11, 14):
        plan = minimal_repair(code_15_10, (target,))
        helpers = {b: shards[b - 1] for b in plan.helpers}
        rebuilt = repair_stream(code_15_10, plan, helpers)
        assert rebuilt[target] == shards[target - 1]


def test_repair_stream_requires_all_helpers(code_15_10):
    data = b"y" * 40
    shards = encode_stream(code_15_10, data)
    plan = minimal_repair(code_15_10, (2,))
    helpers = {b: shards[b - 1] for b in plan.helpers}
    helpers.pop(plan.helpers[0])
    with pytest.raises(ShardError):
        repair_stream(code_15_10, plan, helpers)


def test_non_byte_field_rejected():
    from blrc.code import CodeSpec, assign_coefficients
    from blrc.search import random_support

    field = FieldSpec(4, 0b10011)
    spec = CodeSpec(8, 5, 2, field)
    code = assign_coefficients(random_support(spec, seed=1), spec, seed=1)
    with pytest.raises(ShardError):
        encode_stream(code, b"abc")


def test_shard_file_round_trip(tmp_path):
    header = ShardHeader("ab" * 32, 3, 11, 100)
    payload = bytes(range(11))
    path = shard_path(tmp_path, "demo.bin", 3)
    write_shard(path, header, payload)
    assert path.name == "demo.bin.s03"
    back_header, back_payload = read_shard(path)
    assert back_header == header
    assert back_payload == payload


def test_shard_file_errors(tmp_path):
    path = tmp_path / "bad.s01"
    path.write_bytes(b"junk")
    with pytest.raises(ShardError):
        read_shard(path)
    with pytest.raises(ShardError):
        write_shard(path, ShardHeader("d", 1, 5, 3), b"too-short")


def test_mismatched_payload_lengths_rejected(code_15_10):
    shards = encode_stream(code_15_10, b"z" * 50)
    partial = {1: shards[0], 2: shards[1][:-1]}
    with pytest.raises(ShardError):
        decode_stream(code_15_10, partial, 10)
