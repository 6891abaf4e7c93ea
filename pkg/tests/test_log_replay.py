import json
from importlib.resources import files

import jsonschema
import pytest

from cattle_trade import preset
from cattle_trade.events import EVENT_TYPES, Event, hidden_fields, view
from cattle_trade.logio import SchemaVersionError, file_sha256, read_log, read_records, write_log
from cattle_trade.replay import replay, replay_events, replay_records
from helpers import code_game, random_game


def _schema():
    return json.loads(files("cattle_trade").joinpath("schema/events.schema.json").read_text())


# -- redaction ---------------------------------------------------------------

def test_tc_offer_hidden_from_target_and_bystanders():
    ev = Event("TCInitiated", 3, {"initiator": 0, "target": 1, "animal": "cat", "trade_size": 1,
                                  "card_count": 2, "offer": [50, 0], "offer_total": 50})
    assert view(ev, 0).data["offer_total"] == 50
    assert "offer" not in view(ev, 1).data and view(ev, 1).data["card_count"] == 2
    by = view(ev, 2).data
    assert "offer" not in by and "offer_total" not in by and "card_count" not in by


def test_reveal_private_to_participants():
    ev = Event("TCRevealed", 1, {"initiator": 0, "target": 1, "initiator_total": 50, "target_total": 0})
    assert view(ev, 1) is not None and view(ev, 2) is None
    assert hidden_fields(ev, 3) == list(ev.data)


def test_payment_cards_visible_only_to_the_two_sides():
    ev = Event("AuctionSold", 1, {"auctioneer": 0, "bidder": 1, "animal": "cow", "price": 60,
                                  "payer": 1, "payee": 0, "cards_paid": [100], "total_paid": 100})
    assert view(ev, 0).data["total_paid"] == 100
    assert view(ev, 2).data == {"auctioneer": 0, "bidder": 1, "animal": "cow", "price": 60,
                                "payer": 1, "payee": 0}


def test_overbid_flag_and_digest_never_shown():
    ev = Event("AuctionRound", 0, {"round": 0, "bids": [], "passes": [], "notes": [], "over_wealth": [2]})
    assert "over_wealth" not in view(ev, 2).data


# -- files -------------------------------------------------------------------

def test_write_read_round_trip(tmp_path):
    g = code_game(4)
    p = tmp_path / "sub" / "g.jsonl"
    digest = write_log(p, g.state.log)
    assert digest == file_sha256(p)
    back = read_log(p)
    assert [e.to_dict() for e in back] == [json.loads(json.dumps(e.to_dict())) for e in g.state.log]
    assert [r["seq"] for r in read_records(p)] == list(range(len(back)))


def test_every_record_matches_schema(tmp_path):
    validator = jsonschema.Draft202012Validator(_schema())
    assert set(_schema()["properties"]["type"]["enum"]) == set(EVENT_TYPES)
    seen = set()
    for seed in range(12):
        g = code_game(seed) if seed % 2 else random_game(seed, preset("standard", auction_mode="fast"))
        p = tmp_path / f"{seed}.jsonl"
        write_log(p, g.state.log)
        for rec in read_records(p):
            errors = list(validator.iter_errors(rec))
            assert not errors, (rec["type"], errors[0].message)
            seen.add(rec["type"])
    assert {"GameStarted", "AuctionSold", "TCResolved", "GameEnded"} <= seen


def test_schema_rejects_missing_field():
    validator = jsonschema.Draft202012Validator(_schema())
    bad = {"seq": 0, "type": "AuctionSold", "turn": 0, "bidder": 1}
    assert list(validator.iter_errors(bad))


# -- replay ------------------------------------------------------------------

def test_replay_matches_final_state(tmp_path):
    for seed in range(10):
        g = code_game(seed)
        p = tmp_path / f"{seed}.jsonl"
        write_log(p, g.state.log)
        res = replay(p)
        assert res.match, res.message
        assert res.state.digest() == g.state.digest()
        assert res.state.log[-1].data["scores"] == g.state.log[-1].data["scores"]


def test_replay_in_memory_other_modes():
    for mode in ("fast", "legacy"):
        g = random_game(2, preset("quick", auction_mode=mode))
        assert replay_events(g.state.log).match


def test_edited_bid_reports_that_event(tmp_path):
    g = code_game(6)
    p = tmp_path / "g.jsonl"
    write_log(p, g.state.log)
    recs = read_records(p)
    idx = next(i for i, r in enumerate(recs)
               if r["type"] == "AuctionRound" and r["bids"] and r["bids"][0]["amount"] >= 20)
    recs[idx]["bids"][0]["amount"] -= 10
    res = replay_records(recs)
    assert not res.match and res.mismatch_index == recs[idx]["seq"]
    assert res.expected["bids"] != res.actual["bids"]


def test_edited_decision_diverges(tmp_path):
    g = code_game(8)
    recs = [dict(e.to_dict(i)) for i, e in enumerate(g.state.log)]
    idx = next(i for i, r in enumerate(recs) if r["type"] == "Decision" and r["kind"] == "bid"
               and r["applied"]["amount"] is not None)
    recs[idx] = {**recs[idx], "applied": {"kind": "bid", "amount": None}}
    res = replay_records(recs)
    assert not res.match and res.mismatch_index is not None and res.mismatch_index > idx - 5


def test_older_schema_version_is_refused(tmp_path):
    g = code_game(1)
    p = tmp_path / "old.jsonl"
    write_log(p, g.state.log)
    lines = p.read_text().splitlines()
    head = json.loads(lines[0])
    head["schema_version"] = 0
    p.write_text("\n".join([json.dumps(head)] + lines[1:]) + "\n")
    with pytest.raises(SchemaVersionError, match="version"):
        replay(p)
    with pytest.raises(SchemaVersionError):
        read_log(p)


def test_log_must_start_with_header(tmp_path):
    p = tmp_path / "x.jsonl"
    p.write_text('{"seq":0,"type":"TurnStarted","turn":0,"player":0,"deck_remaining":40}\n')
    with pytest.raises(SchemaVersionError):
        read_log(p)


def test_same_seed_gives_byte_identical_logs(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert write_log(a, code_game(21).state.log) == write_log(b, code_game(21).state.log)
    assert a.read_bytes() == b.read_bytes()
