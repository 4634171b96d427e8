import json
from fractions import Fraction

import pytest

from accessgraph import (
    AppleConfig,
    Device,
    GoogleConfig,
    InvalidRecord,
    PasswordAccess,
    SecurityLevel,
    UserAccountRecord,
    batch_analyze,
    instantiate_user_graph,
    read_survey,
    record_from_json,
    record_to_json,
    security_score,
)
from accessgraph.providers import (
    ROOT_ACCOUNT,
    SurveyRow,
    batch_analyze_rows,
    blank_record,
    cohort_report_json,
    template_manifest,
    validate_record,
)
from conftest import SAMPLES
from oracles import brute_force_key_methods

PHONE = Device("d1", "phone", "Phone 1")
LAPTOP = Device("d2", "computer_laptop", "Laptop")
KEY = Device("d3", "security_key", "Security key")
MEMORY_ONLY = PasswordAccess(memory=True)


def google_record(devices=(), password=MEMORY_ONLY, **config) -> UserAccountRecord:
    return UserAccountRecord(
        provider="google",
        devices=tuple(devices),
        password_access=password,
        google=GoogleConfig(**config),
    )


def apple_record(devices=(), password=MEMORY_ONLY, **config) -> UserAccountRecord:
    return UserAccountRecord(
        provider="apple",
        devices=tuple(devices),
        password_access=password,
        apple=AppleConfig(**config),
    )


# ---------------------------------------------------------------------------
# Graph instantiation.


def test_google_mfa_graph_structure():
    graph = instantiate_user_graph(
        google_record(devices=[PHONE], mfa_enabled=True, prompts=("d1",))
    )
    assert set(graph.node_ids()) == {
        "account", "password-and-factor", "password", "memory",
        "mfa-options", "prompts", "d1",
    }
    assert graph.roots == ("account",)
    assert graph.node("account").label == "Google account"
    assert graph.children_of("account") == ("password-and-factor",)
    assert graph.children_of("password-and-factor") == ("password", "mfa-options")
    assert graph.children_of("mfa-options") == ("prompts",)
    assert graph.children_of("prompts") == ("d1",)
    assert graph.node("d1").label == "Phone 1"


def test_google_without_mfa_links_password_directly():
    graph = instantiate_user_graph(google_record())
    assert graph.children_of("account") == ("password",)
    assert not graph.has_node("password-and-factor")


def test_google_sign_in_by_phone_only_without_mfa():
    record = google_record(devices=[PHONE], sign_in_by_phone=("d1",))
    graph = instantiate_user_graph(record)
    assert graph.children_of("sign-in-by-phone") == ("d1",)
    assert graph.children_of("account") == ("password", "sign-in-by-phone")

    with_mfa = google_record(
        devices=[PHONE], mfa_enabled=True, prompts=("d1",), sign_in_by_phone=("d1",)
    )
    graph = instantiate_user_graph(with_mfa)
    assert not graph.has_node("sign-in-by-phone")


def test_google_recovery_branches():
    record = google_record(devices=[PHONE], recovery_phone="d1", recovery_email=True)
    graph = instantiate_user_graph(record)
    assert graph.children_of("account") == ("password", "recovery-phone", "recovery-email")
    assert graph.children_of("recovery-phone") == ("d1",)
    # Recovery email is a referenced external account, opaque from here.
    assert graph.node("recovery-email").type.value == "account"
    assert graph.children_of("recovery-email") == ()


def test_google_backup_codes_stay_unmapped():
    record = google_record(devices=[PHONE], mfa_enabled=True, backup_codes=True)
    graph = instantiate_user_graph(record)
    assert graph.children_of("backup-codes") == ()
    assert graph.node("backup-codes").category.value == "software_based"


def test_password_access_methods():
    record = google_record(
        devices=[PHONE, LAPTOP],
        password=PasswordAccess(
            memory=True, password_manager=True, browser_devices=("d1", "d2"), paper=True
        ),
    )
    graph = instantiate_user_graph(record)
    assert graph.children_of("password") == (
        "memory", "password-vault", "paper-note", "d1", "d2",
    )


def test_apple_graph_structure():
    record = apple_record(
        devices=[PHONE, LAPTOP],
        trusted_devices=("d1", "d2"),
        trusted_phone_numbers=("d1",),
    )
    graph = instantiate_user_graph(record)
    assert graph.node("account").label == "Apple account"
    assert graph.children_of("account") == (
        "password-and-factor", "recovery-via-trusted-device",
    )
    assert graph.children_of("password-and-factor") == ("password", "trusted-factors")
    assert graph.children_of("trusted-factors") == (
        "trusted-devices", "trusted-phone-numbers",
    )
    assert graph.children_of("trusted-devices") == ("d1", "d2")
    assert graph.children_of("trusted-phone-numbers") == ("d1",)
    assert graph.children_of("recovery-via-trusted-device") == ("d1", "d2")


def test_apple_recovery_key_replaces_default_recovery():
    record = apple_record(devices=[PHONE], trusted_devices=("d1",), recovery_key=True)
    graph = instantiate_user_graph(record)
    assert graph.has_node("recovery-key")
    assert graph.children_of("recovery-key") == ()  # unmapped on purpose
    assert not graph.has_node("recovery-via-trusted-device")


def test_apple_without_factors_has_bare_password_branch():
    graph = instantiate_user_graph(apple_record())
    assert graph.children_of("password-and-factor") == ("password",)
    assert not graph.has_node("trusted-factors")
    assert not graph.has_node("recovery-via-trusted-device")


# ---------------------------------------------------------------------------
# Security fixtures for the provider setups.


@pytest.mark.parametrize(
    "record,expected",
    [
        # Hardware key as the only second factor, nothing to fall back on.
        (
            google_record(devices=[KEY], mfa_enabled=True, security_key=("d3",)),
            SecurityLevel.HIGH,
        ),
        (
            google_record(devices=[PHONE], mfa_enabled=True, prompts=("d1",)),
            SecurityLevel.MEDIUM,
        ),
        # A recovery email drags any configuration down to its level.
        (
            google_record(
                devices=[KEY], mfa_enabled=True, security_key=("d3",),
                recovery_email=True,
            ),
            SecurityLevel.LOW,
        ),
        (apple_record(devices=[PHONE], trusted_devices=("d1",)), SecurityLevel.HIGH),
        (
            apple_record(
                devices=[PHONE, LAPTOP],
                trusted_devices=("d2",),
                trusted_phone_numbers=("d1",),
            ),
            SecurityLevel.MEDIUM,
        ),
    ],
    ids=[
        "google-key-only",
        "google-password-prompts",
        "google-recovery-email",
        "apple-trusted-device-only",
        "apple-with-phone-number",
    ],
)
def test_provider_security_levels(record, expected):
    graph = instantiate_user_graph(record)
    assert security_score(graph, ROOT_ACCOUNT) is expected


# ---------------------------------------------------------------------------
# Record validation.


def test_validate_rejects_unknown_provider():
    record = UserAccountRecord(provider="yahoo")
    with pytest.raises(InvalidRecord) as err:
        validate_record(record)
    assert err.value.path == "provider"


@pytest.mark.parametrize(
    "record,path",
    [
        (
            google_record(devices=[Device("d1", "fridge", "Fridge")]),
            "devices[0].category",
        ),
        (
            google_record(devices=[PHONE, Device("d1", "phone", "Twin")]),
            "devices[1].id",
        ),
        (google_record(prompts=("nope",)), "google.prompts"),
        (google_record(devices=[LAPTOP], voice_text=("d2",)), "google.voice_text"),
        (google_record(devices=[PHONE], security_key=("d1",)), "google.security_key"),
        (google_record(devices=[LAPTOP], recovery_phone="d2"), "google.recovery_phone"),
        (google_record(mfa_enabled=True), "google.mfa_enabled"),
        (
            UserAccountRecord(provider="google", google=GoogleConfig(), apple=AppleConfig()),
            "apple",
        ),
        (UserAccountRecord(provider="google"), "google"),
        (UserAccountRecord(provider="apple"), "apple"),
        (
            apple_record(devices=[LAPTOP], trusted_phone_numbers=("d2",)),
            "apple.trusted_phone_numbers",
        ),
        (
            UserAccountRecord(
                provider="apple", apple=AppleConfig(), google=GoogleConfig()
            ),
            "google",
        ),
        (
            google_record(
                password=PasswordAccess(browser_devices=("ghost",)),
            ),
            "password_access.browser_devices",
        ),
    ],
)
def test_validate_paths(record, path):
    with pytest.raises(InvalidRecord) as err:
        validate_record(record)
    assert err.value.path == path


def test_mfa_with_a_factor_is_fine():
    validate_record(google_record(devices=[PHONE], mfa_enabled=True, voice_text=("d1",)))


# ---------------------------------------------------------------------------
# Survey ingestion.

CSV_HEADER = (
    "provider,device_1_category,device_1_label,device_2_category,device_2_label,"
    "pw_memory,pw_manager,pw_browser_devices,pw_paper,"
    "mfa_enabled,prompts_devices,authapp_devices,backup_codes,voicetext_devices,"
    "key_devices,signin_phone_devices,recovery_phone_device,recovery_email,"
    "trusted_devices,trusted_number_devices,recovery_key"
)


def csv_survey(*rows: str) -> str:
    return "\n".join([CSV_HEADER, *rows]) + "\n"


def test_sample_survey_parses_cleanly():
    rows = read_survey((SAMPLES / "survey.csv").read_text())
    assert len(rows) == 4
    assert all(row.error is None for row in rows)
    assert rows[0].record.google.voice_text == ("d1",)
    assert rows[3].record.apple.trusted_devices == ("d1", "d2")


def test_csv_row_parsing_details():
    text = csv_survey(
        "google,phone,My phone,tablet,,1,0,d1;d2,0,1,,d2,1,d1,,,d1,1,,,0",
    )
    rows = read_survey(text)
    assert rows[0].error is None
    record = rows[0].record
    assert record.devices == (
        Device("d1", "phone", "My phone"),
        Device("d2", "tablet", "Device 2"),  # label falls back to the number
    )
    assert record.password_access.browser_devices == ("d1", "d2")
    assert record.google.authenticator_app == ("d2",)
    assert record.google.backup_codes is True
    assert record.google.recovery_phone == "d1"
    assert record.google.recovery_email is True


def test_csv_unknown_header_rejected():
    with pytest.raises(InvalidRecord, match="unknown column"):
        read_survey("provider,shoe_size\ngoogle,12\n")


def test_csv_row_errors_do_not_poison_the_batch():
    text = csv_survey(
        "google,,,,,1,0,,0,2,,,0,,,,,0,,,0",  # mfa_enabled flag is not 0/1
        "google,,,,,1,0,,0,0,,,0,,,,,0,,,0",
    )
    rows = read_survey(text)
    assert rows[0].error is not None and "not a 0/1 flag" in rows[0].error
    assert rows[1].record is not None


def test_csv_cross_provider_fields_rejected():
    google_with_apple = csv_survey("google,,,,,1,0,,0,0,,,0,,,,,0,d1,,0")
    assert "apple field on a google row" in read_survey(google_with_apple)[0].error
    apple_with_google = csv_survey("apple,phone,Phone,,,1,0,,0,0,d1,,0,,,,,0,d1,,0")
    assert "google field on an apple row" in read_survey(apple_with_google)[0].error


def test_csv_recovery_phone_takes_one_id():
    text = csv_survey("google,phone,A,phone,B,1,0,,0,0,,,0,,,,d1;d2,0,,,0")
    assert "single device id" in read_survey(text)[0].error


def test_empty_survey():
    assert read_survey("") == []
    assert read_survey(CSV_HEADER + "\n") == []


def test_jsonl_round_trip():
    records = [
        google_record(devices=[PHONE], mfa_enabled=True, voice_text=("d1",)),
        apple_record(devices=[PHONE], trusted_devices=("d1",)),
    ]
    text = "\n".join(json.dumps(record_to_json(r)) for r in records) + "\n"
    rows = read_survey(text)
    assert [row.record for row in rows] == records


def test_jsonl_bad_lines_become_row_errors():
    text = '{"provider": "google", "google": {}}\n{broken\n'
    rows = read_survey(text)
    assert rows[0].record is not None
    assert rows[1].error is not None


@pytest.mark.parametrize(
    "obj,path",
    [
        ({"provider": "google", "google": {}, "shoe_size": 12}, "shoe_size"),
        ({"provider": 5}, "provider"),
        ({"provider": "google", "devices": "d1", "google": {}}, "devices"),
        ({"provider": "google", "devices": [{"id": "", "category": "phone"}],
          "google": {}}, "devices[0].id"),
        ({"provider": "google", "google": {"prompts": "d1"}}, "google.prompts"),
        ({"provider": "google", "google": {"mfa_enabled": "yes"}},
         "google.mfa_enabled"),
        ({"provider": "google", "google": {"recovery_phone": 7}},
         "google.recovery_phone"),
        ({"provider": "apple", "apple": {"recovery_key": 1}}, "apple.recovery_key"),
        ({"provider": "apple", "apple": {"trusted": []}}, "apple.trusted"),
        ({"provider": "google", "google": {},
          "password_access": {"pin": True}}, "password_access.pin"),
    ],
)
def test_record_from_json_errors(obj, path):
    with pytest.raises(InvalidRecord) as err:
        record_from_json(obj)
    assert err.value.path == path


def test_record_from_json_accepts_full_shape():
    record = record_from_json(
        {
            "provider": "google",
            "devices": [{"id": "d1", "category": "phone", "label": "Phone"}],
            "password_access": {"memory": True},
            "google": {"mfa_enabled": True, "prompts": ["d1"]},
        }
    )
    assert record.google.prompts == ("d1",)
    assert record.devices[0].label == "Phone"
    # Missing label falls back to the id.
    record = record_from_json(
        {"provider": "google", "devices": [{"id": "d1", "category": "phone"}],
         "google": {}}
    )
    assert record.devices[0].label == "d1"


# ---------------------------------------------------------------------------
# Templates.


def test_blank_records_validate():
    validate_record(blank_record("google"))
    validate_record(blank_record("apple"))
    with pytest.raises(InvalidRecord):
        blank_record("yahoo")


def test_template_manifests():
    google = template_manifest("google")
    assert google["provider"] == "google"
    assert google["device_categories"] == [
        "phone", "computer_laptop", "tablet", "smart_watch", "security_key",
    ]
    assert google["record"]["provider"] == "google"
    assert len(google["fields"]) == 13
    apple = template_manifest("apple")
    assert len(apple["fields"]) == 7
    paths = {f["path"] for f in apple["fields"]}
    assert "apple.recovery_key" in paths
    assert all(f["kind"] in ("bool", "device_id", "device_ids") for f in apple["fields"])


# ---------------------------------------------------------------------------
# Cohort analysis.


def three_row_cohort() -> list[UserAccountRecord]:
    return [
        # Everything funnels through one phone.
        google_record(
            devices=[PHONE],
            password=PasswordAccess(browser_devices=("d1",)),
            mfa_enabled=True,
            voice_text=("d1",),
            recovery_phone="d1",
        ),
        # Memorized password + prompts, plus an external recovery email.
        google_record(devices=[PHONE], mfa_enabled=True, prompts=("d1",),
                      recovery_email=True),
        # Password-only user.
        google_record(),
    ]


def test_batch_three_rows():
    report = batch_analyze(three_row_cohort())
    assert report.errors == ()
    scores = [u.analysis.result.score for u in report.users]
    assert scores == [Fraction(1), Fraction(2), Fraction(1)]
    assert report.security_histogram == {"low": 2, "medium": 1, "high": 0}
    assert report.accessibility_histogram == {1: 2, 2: 1}
    assert report.security_bands == {"red": 2, "yellow": 1, "green": 0}
    assert report.accessibility_bands == {"red": 2, "yellow": 1, "green": 0}
    at_risk = [(u.index, u.key_methods) for u in report.at_risk]
    assert at_risk == [(0, ("d1",)), (2, ("memory",))]


def test_batch_carries_errors_by_index():
    report = batch_analyze([three_row_cohort()[0], None])
    assert len(report.users) == 1
    assert report.errors == ((1, "records[1]: unparsed record"),)


def test_batch_rows_merges_parse_errors():
    rows = [
        SurveyRow(0, record=google_record()),
        SurveyRow(1, error="boom"),
        SurveyRow(2, record=UserAccountRecord(provider="google")),  # invalid
    ]
    report = batch_analyze_rows(rows)
    assert [u.index for u in report.users] == [0]
    assert report.errors == ((1, "boom"), (2, "google: missing google configuration"))


def test_adoption_counters():
    records = [
        google_record(),  # password only
        google_record(devices=[PHONE], sign_in_by_phone=("d1",)),
        google_record(devices=[PHONE, KEY], mfa_enabled=True, prompts=("d1",),
                      authenticator_app=("d1",), backup_codes=True,
                      voice_text=("d1",), security_key=("d3",),
                      recovery_phone="d1", recovery_email=True),
        apple_record(devices=[PHONE], trusted_devices=("d1",),
                     trusted_phone_numbers=("d1",), recovery_key=True),
        apple_record(),
    ]
    adoption = batch_analyze(records).adoption
    assert adoption["google"] == {
        "password_only": 1,
        "sign_in_by_phone": 1,
        "prompts": 1,
        "authenticator_app": 1,
        "backup_codes": 1,
        "voice_text": 1,
        "security_key": 1,
        "recovery_phone": 1,
        "recovery_email": 1,
    }
    assert adoption["apple"] == {
        "trusted_devices": 1,
        "trusted_phone_numbers": 1,
        "recovery_key": 1,
    }


def test_cohort_report_json_shape():
    payload = cohort_report_json(batch_analyze(three_row_cohort()))
    assert {u["index"] for u in payload["users"]} == {0, 1, 2}
    user0 = payload["users"][0]
    assert user0["provider"] == "google"
    assert user0["key_access_methods"] == ["d1"]
    assert user0["accessibility"]["narrative"] == (
        "Access to Google account might be lost when losing Phone 1"
    )
    aggregates = payload["aggregates"]
    assert aggregates["count"] == 3
    assert aggregates["accessibility_histogram"] == {"1": 2, "2": 1}
    assert aggregates["at_risk"][0] == {
        "index": 0, "score": "1", "key_access_methods": ["d1"],
    }
    assert payload["errors"] == []


def test_permuting_rows_permutes_nothing_but_indexes():
    records = three_row_cohort()
    forward = batch_analyze(records)
    backward = batch_analyze(list(reversed(records)))
    assert forward.security_histogram == backward.security_histogram
    assert forward.accessibility_histogram == backward.accessibility_histogram
    assert forward.adoption == backward.adoption
    forward_scores = sorted(str(u.analysis.result.score) for u in forward.users)
    backward_scores = sorted(str(u.analysis.result.score) for u in backward.users)
    assert forward_scores == backward_scores


def test_key_methods_agree_with_brute_force_on_cohort():
    report = batch_analyze(three_row_cohort())
    for user in report.users:
        reduced = user.analysis.result.reduced
        assert list(user.key_methods) == brute_force_key_methods(
            reduced.implicants, list(reduced.variables())
        )
