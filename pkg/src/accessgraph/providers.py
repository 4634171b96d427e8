"""Google and Apple account templates plus survey-record ingestion.

A survey record captures one person's setup: which devices they own,
how they can get at their password, and which sign-in and recovery
methods are switched on. `instantiate_user_graph` turns a record into a
full account access graph following the provider's structure, and
`batch_analyze` scores a whole cohort and aggregates the results.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

from .accessibility import (
    AccountAnalysis,
    accessibility_band,
    account_report,
    analyze_account,
    key_access_methods,
)
from .errors import InvalidRecord
from .formulas import UnmappedLeafPolicy
from .graph import AccountAccessGraph, build_graph
from .security import DEFAULT_POLICY, ScoringPolicy, SecurityLevel, security_band

GOOGLE = "google"
APPLE = "apple"
PROVIDERS = (GOOGLE, APPLE)

DEVICE_CATEGORIES = ("phone", "computer_laptop", "tablet", "smart_watch", "security_key")


@dataclass(frozen=True)
class Device:
    id: str
    category: str
    label: str


@dataclass(frozen=True)
class PasswordAccess:
    """How the respondent can retrieve their password."""

    memory: bool = False
    password_manager: bool = False
    browser_devices: tuple[str, ...] = ()
    paper: bool = False


@dataclass(frozen=True)
class GoogleConfig:
    mfa_enabled: bool = False
    prompts: tuple[str, ...] = ()
    authenticator_app: tuple[str, ...] = ()
    backup_codes: bool = False
    voice_text: tuple[str, ...] = ()
    security_key: tuple[str, ...] = ()
    sign_in_by_phone: tuple[str, ...] = ()
    recovery_phone: str | None = None
    recovery_email: bool = False


@dataclass(frozen=True)
class AppleConfig:
    trusted_devices: tuple[str, ...] = ()
    trusted_phone_numbers: tuple[str, ...] = ()
    recovery_key: bool = False


@dataclass(frozen=True)
class UserAccountRecord:
    provider: str
    devices: tuple[Device, ...] = ()
    password_access: PasswordAccess = field(default_factory=PasswordAccess)
    google: GoogleConfig | None = None
    apple: AppleConfig | None = None


def validate_record(record: UserAccountRecord) -> None:
    """Raise InvalidRecord (with a field path) on any constraint breach."""
    if record.provider not in PROVIDERS:
        raise InvalidRecord("provider", f"unknown provider {record.provider!r}")

    by_id: dict[str, Device] = {}
    for i, device in enumerate(record.devices):
        if device.category not in DEVICE_CATEGORIES:
            raise InvalidRecord(
                f"devices[{i}].category", f"unknown category {device.category!r}"
            )
        if device.id in by_id:
            raise InvalidRecord(f"devices[{i}].id", f"duplicate device id {device.id!r}")
        by_id[device.id] = device

    def check_ids(path: str, ids: tuple[str, ...], category: str | None = None) -> None:
        for device_id in ids:
            device = by_id.get(device_id)
            if device is None:
                raise InvalidRecord(path, f"unknown device {device_id!r}")
            if category is not None and device.category != category:
                raise InvalidRecord(
                    path, f"{device_id!r} is not a {category}-category device"
                )

    check_ids("password_access.browser_devices", record.password_access.browser_devices)

    if record.provider == GOOGLE:
        if record.google is None:
            raise InvalidRecord("google", "missing google configuration")
        if record.apple is not None:
            raise InvalidRecord("apple", "apple configuration on a google record")
        g = record.google
        check_ids("google.prompts", g.prompts)
        check_ids("google.authenticator_app", g.authenticator_app)
        check_ids("google.voice_text", g.voice_text, "phone")
        check_ids("google.security_key", g.security_key, "security_key")
        check_ids("google.sign_in_by_phone", g.sign_in_by_phone, "phone")
        if g.recovery_phone is not None:
            check_ids("google.recovery_phone", (g.recovery_phone,), "phone")
        if g.mfa_enabled and not _google_second_factors(g):
            raise InvalidRecord(
                "google.mfa_enabled", "MFA enabled but no second factor configured"
            )
    else:
        if record.apple is None:
            raise InvalidRecord("apple", "missing apple configuration")
        if record.google is not None:
            raise InvalidRecord("google", "google configuration on an apple record")
        a = record.apple
        check_ids("apple.trusted_devices", a.trusted_devices)
        check_ids("apple.trusted_phone_numbers", a.trusted_phone_numbers, "phone")


def _google_second_factors(g: GoogleConfig) -> list[tuple[str, str, str, tuple[str, ...]]]:
    """Enabled MFA methods as (node id, label, category token, device ids)."""
    factors: list[tuple[str, str, str, tuple[str, ...]]] = []
    if g.prompts:
        factors.append(("prompts", "Google prompts", "software_based", g.prompts))
    if g.authenticator_app:
        factors.append(
            ("authenticator-app", "Authenticator app", "software_based", g.authenticator_app)
        )
    if g.backup_codes:
        factors.append(("backup-codes", "Backup codes", "software_based", ()))
    if g.voice_text:
        factors.append(("voice-text", "Voice or text message", "software_based", g.voice_text))
    if g.security_key:
        factors.append(("security-key", "Security key", "hardware_based", g.security_key))
    return factors


class _GraphSketch:
    """Accumulates a graph document; devices materialize on first use."""

    def __init__(self, devices: tuple[Device, ...]) -> None:
        self._devices = {d.id: d for d in devices}
        self.nodes: list[dict] = []
        self.edges: list[list[str]] = []
        self._have: set[str] = set()

    def add(self, node_id: str, kind: str, label: str, **extra: str) -> str:
        if node_id not in self._have:
            self._have.add(node_id)
            self.nodes.append({"id": node_id, "kind": kind, "label": label, **extra})
        return node_id

    def link(self, parent: str, child: str) -> None:
        self.edges.append([parent, child])

    def attach_devices(self, method_id: str, device_ids: tuple[str, ...]) -> None:
        for device_id in device_ids:
            device = self._devices[device_id]
            self.add(device.id, "access_method", device.label)
            self.link(method_id, device.id)

    def document(self, root: str) -> dict:
        return {"nodes": self.nodes, "edges": self.edges, "roots": [root]}


def _password_method(sketch: _GraphSketch, pw: PasswordAccess) -> str:
    method = sketch.add("password", "auth_method", "Password", category="knowledge_based")
    if pw.memory:
        sketch.link(method, sketch.add("memory", "access_method", "Memory"))
    if pw.password_manager:
        sketch.link(method, sketch.add("password-vault", "access_method", "Password manager"))
    if pw.paper:
        sketch.link(method, sketch.add("paper-note", "access_method", "Paper note"))
    sketch.attach_devices(method, pw.browser_devices)
    return method


def instantiate_user_graph(record: UserAccountRecord) -> AccountAccessGraph:
    """Build and validate the account graph a record describes.

    Google: signing in is the password alone, or password plus any one
    enabled second factor when MFA is on; sign-in by phone only exists
    while MFA is off; recovery phone and recovery email are independent
    ways in. Apple: password plus any trusted device or trusted phone
    number; recovery goes through the recovery key when one is set
    (setting it disables the default), otherwise through a trusted
    device. Methods the survey maps to no device (backup codes, the
    recovery key, a referenced recovery email) stay leaves and are
    covered by the unmapped-leaf policy at analysis time.
    """
    validate_record(record)
    sketch = _GraphSketch(record.devices)

    if record.provider == GOOGLE:
        root = sketch.add("account", "account", "Google account")
        g = record.google
        assert g is not None
        if g.mfa_enabled:
            branch = sketch.add(
                "password-and-factor", "operator", "Password with second factor", op="and"
            )
            sketch.link(root, branch)
            sketch.link(branch, _password_method(sketch, record.password_access))
            options = sketch.add("mfa-options", "operator", "Any second factor", op="or")
            sketch.link(branch, options)
            for method_id, label, category, devices in _google_second_factors(g):
                sketch.link(options, sketch.add(method_id, "auth_method", label, category=category))
                sketch.attach_devices(method_id, devices)
        else:
            sketch.link(root, _password_method(sketch, record.password_access))
            if g.sign_in_by_phone:
                method = sketch.add(
                    "sign-in-by-phone", "auth_method", "Sign in by phone",
                    category="software_based",
                )
                sketch.link(root, method)
                sketch.attach_devices(method, g.sign_in_by_phone)
        if g.recovery_phone is not None:
            method = sketch.add(
                "recovery-phone", "auth_method", "Recovery phone", category="software_based"
            )
            sketch.link(root, method)
            sketch.attach_devices(method, (g.recovery_phone,))
        if g.recovery_email:
            sketch.link(root, sketch.add("recovery-email", "account", "Recovery email"))
    else:
        root = sketch.add("account", "account", "Apple account")
        a = record.apple
        assert a is not None
        branch = sketch.add(
            "password-and-factor", "operator", "Password with trusted factor", op="and"
        )
        sketch.link(root, branch)
        sketch.link(branch, _password_method(sketch, record.password_access))
        factor_sources: list[str] = []
        if a.trusted_devices:
            method = sketch.add(
                "trusted-devices", "auth_method", "Trusted device", category="hardware_based"
            )
            sketch.attach_devices(method, a.trusted_devices)
            factor_sources.append(method)
        if a.trusted_phone_numbers:
            method = sketch.add(
                "trusted-phone-numbers", "auth_method", "Trusted phone number",
                category="software_based",
            )
            sketch.attach_devices(method, a.trusted_phone_numbers)
            factor_sources.append(method)
        if factor_sources:
            options = sketch.add("trusted-factors", "operator", "Any trusted factor", op="or")
            sketch.link(branch, options)
            for method in factor_sources:
                sketch.link(options, method)
        if a.recovery_key:
            sketch.link(
                root,
                sketch.add("recovery-key", "auth_method", "Recovery key",
                           category="software_based"),
            )
        elif a.trusted_devices:
            method = sketch.add(
                "recovery-via-trusted-device", "auth_method", "Recovery via trusted device",
                category="hardware_based",
            )
            sketch.link(root, method)
            sketch.attach_devices(method, a.trusted_devices)

    return build_graph(sketch.document(root))


ROOT_ACCOUNT = "account"


# ---------------------------------------------------------------------------
# Survey ingestion: CSV with one row per respondent, or JSON lines.

_BASE_COLUMNS = {
    "provider",
    "pw_memory", "pw_manager", "pw_browser_devices", "pw_paper",
    "mfa_enabled", "prompts_devices", "authapp_devices", "backup_codes",
    "voicetext_devices", "key_devices", "signin_phone_devices",
    "recovery_phone_device", "recovery_email",
    "trusted_devices", "trusted_number_devices", "recovery_key",
}
_DEVICE_COLUMN = re.compile(r"device_(\d+)_(category|label)$")

_TRUE = {"1", "true", "yes"}
_FALSE = {"0", "false", "no", ""}


@dataclass(frozen=True)
class SurveyRow:
    """One parsed survey row; exactly one of record/error is set."""

    index: int
    record: UserAccountRecord | None = None
    error: str | None = None


def read_survey(text: str) -> list[SurveyRow]:
    """Parse survey data, auto-detecting CSV or JSON-lines."""
    if text.lstrip().startswith("{"):
        return _read_jsonl(text)
    return _read_csv(text)


def _read_jsonl(text: str) -> list[SurveyRow]:
    rows: list[SurveyRow] = []
    index = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rows.append(SurveyRow(index, record=record_from_json(obj)))
        except (json.JSONDecodeError, InvalidRecord) as exc:
            rows.append(SurveyRow(index, error=str(exc)))
        index += 1
    return rows


def _read_csv(text: str) -> list[SurveyRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    device_numbers: list[int] = []
    for column in reader.fieldnames:
        match = _DEVICE_COLUMN.match(column)
        if match:
            n = int(match.group(1))
            if n not in device_numbers:
                device_numbers.append(n)
        elif column not in _BASE_COLUMNS:
            raise InvalidRecord("header", f"unknown column {column!r}")
    if "provider" not in reader.fieldnames:
        raise InvalidRecord("header", "missing 'provider' column")
    device_numbers.sort()

    rows: list[SurveyRow] = []
    for index, raw in enumerate(reader):
        try:
            rows.append(SurveyRow(index, record=_record_from_csv_row(raw, device_numbers)))
        except InvalidRecord as exc:
            rows.append(SurveyRow(index, error=str(exc)))
    return rows


def _flag(raw: dict, column: str) -> bool:
    value = (raw.get(column) or "").strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise InvalidRecord(column, f"not a 0/1 flag: {value!r}")


def _id_list(raw: dict, column: str) -> tuple[str, ...]:
    value = (raw.get(column) or "").strip()
    if not value:
        return ()
    return tuple(part.strip() for part in value.split(";") if part.strip())


def _record_from_csv_row(raw: dict, device_numbers: list[int]) -> UserAccountRecord:
    provider = (raw.get("provider") or "").strip().lower()
    if provider not in PROVIDERS:
        raise InvalidRecord("provider", f"unknown provider {provider!r}")

    devices: list[Device] = []
    for n in device_numbers:
        category = (raw.get(f"device_{n}_category") or "").strip()
        if not category:
            continue
        label = (raw.get(f"device_{n}_label") or "").strip() or f"Device {n}"
        devices.append(Device(id=f"d{n}", category=category, label=label))

    password_access = PasswordAccess(
        memory=_flag(raw, "pw_memory"),
        password_manager=_flag(raw, "pw_manager"),
        browser_devices=_id_list(raw, "pw_browser_devices"),
        paper=_flag(raw, "pw_paper"),
    )

    recovery_phone_ids = _id_list(raw, "recovery_phone_device")
    if len(recovery_phone_ids) > 1:
        raise InvalidRecord("recovery_phone_device", "expected a single device id")

    google = apple = None
    if provider == GOOGLE:
        google = GoogleConfig(
            mfa_enabled=_flag(raw, "mfa_enabled"),
            prompts=_id_list(raw, "prompts_devices"),
            authenticator_app=_id_list(raw, "authapp_devices"),
            backup_codes=_flag(raw, "backup_codes"),
            voice_text=_id_list(raw, "voicetext_devices"),
            security_key=_id_list(raw, "key_devices"),
            sign_in_by_phone=_id_list(raw, "signin_phone_devices"),
            recovery_phone=recovery_phone_ids[0] if recovery_phone_ids else None,
            recovery_email=_flag(raw, "recovery_email"),
        )
        for column in ("trusted_devices", "trusted_number_devices"):
            if _id_list(raw, column):
                raise InvalidRecord(column, "apple field on a google row")
        if _flag(raw, "recovery_key"):
            raise InvalidRecord("recovery_key", "apple field on a google row")
    else:
        apple = AppleConfig(
            trusted_devices=_id_list(raw, "trusted_devices"),
            trusted_phone_numbers=_id_list(raw, "trusted_number_devices"),
            recovery_key=_flag(raw, "recovery_key"),
        )
        for column in (
            "prompts_devices", "authapp_devices", "voicetext_devices",
            "key_devices", "signin_phone_devices", "recovery_phone_device",
        ):
            if _id_list(raw, column):
                raise InvalidRecord(column, "google field on an apple row")
        for column in ("mfa_enabled", "backup_codes", "recovery_email"):
            if _flag(raw, column):
                raise InvalidRecord(column, "google field on an apple row")

    record = UserAccountRecord(
        provider=provider,
        devices=tuple(devices),
        password_access=password_access,
        google=google,
        apple=apple,
    )
    validate_record(record)
    return record


# ---------------------------------------------------------------------------
# JSON record form (used by JSONL ingestion and the HTTP API).

def record_from_json(obj: dict) -> UserAccountRecord:
    if not isinstance(obj, dict):
        raise InvalidRecord("", "record must be a JSON object")

    def sub(value: object, path: str) -> dict:
        if value is None:
            return {}
        if not isinstance(value, dict):
            raise InvalidRecord(path, "must be an object")
        return value

    def ids(value: object, path: str) -> tuple[str, ...]:
        if value is None:
            return ()
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise InvalidRecord(path, "must be a list of device ids")
        return tuple(value)

    def flag(value: object, path: str) -> bool:
        if value is None:
            return False
        if not isinstance(value, bool):
            raise InvalidRecord(path, "must be a boolean")
        return value

    known = {"provider", "devices", "password_access", "google", "apple"}
    for key in obj:
        if key not in known:
            raise InvalidRecord(key, "unknown record field")

    provider = obj.get("provider")
    if not isinstance(provider, str):
        raise InvalidRecord("provider", "must be a string")

    devices: list[Device] = []
    raw_devices = obj.get("devices") or []
    if not isinstance(raw_devices, list):
        raise InvalidRecord("devices", "must be a list")
    for i, item in enumerate(raw_devices):
        if not isinstance(item, dict):
            raise InvalidRecord(f"devices[{i}]", "must be an object")
        device_id = item.get("id")
        category = item.get("category")
        if not isinstance(device_id, str) or not device_id:
            raise InvalidRecord(f"devices[{i}].id", "must be a non-empty string")
        if not isinstance(category, str):
            raise InvalidRecord(f"devices[{i}].category", "must be a string")
        label = item.get("label")
        if label is not None and not isinstance(label, str):
            raise InvalidRecord(f"devices[{i}].label", "must be a string")
        devices.append(Device(id=device_id, category=category, label=label or device_id))

    pw = sub(obj.get("password_access"), "password_access")
    for key in pw:
        if key not in ("memory", "password_manager", "browser_devices", "paper"):
            raise InvalidRecord(f"password_access.{key}", "unknown field")
    password_access = PasswordAccess(
        memory=flag(pw.get("memory"), "password_access.memory"),
        password_manager=flag(pw.get("password_manager"), "password_access.password_manager"),
        browser_devices=ids(pw.get("browser_devices"), "password_access.browser_devices"),
        paper=flag(pw.get("paper"), "password_access.paper"),
    )

    google = None
    if obj.get("google") is not None:
        g = sub(obj["google"], "google")
        g_known = {
            "mfa_enabled", "prompts", "authenticator_app", "backup_codes", "voice_text",
            "security_key", "sign_in_by_phone", "recovery_phone", "recovery_email",
        }
        for key in g:
            if key not in g_known:
                raise InvalidRecord(f"google.{key}", "unknown field")
        recovery_phone = g.get("recovery_phone")
        if recovery_phone is not None and not isinstance(recovery_phone, str):
            raise InvalidRecord("google.recovery_phone", "must be a device id or null")
        google = GoogleConfig(
            mfa_enabled=flag(g.get("mfa_enabled"), "google.mfa_enabled"),
            prompts=ids(g.get("prompts"), "google.prompts"),
            authenticator_app=ids(g.get("authenticator_app"), "google.authenticator_app"),
            backup_codes=flag(g.get("backup_codes"), "google.backup_codes"),
            voice_text=ids(g.get("voice_text"), "google.voice_text"),
            security_key=ids(g.get("security_key"), "google.security_key"),
            sign_in_by_phone=ids(g.get("sign_in_by_phone"), "google.sign_in_by_phone"),
            recovery_phone=recovery_phone,
            recovery_email=flag(g.get("recovery_email"), "google.recovery_email"),
        )

    apple = None
    if obj.get("apple") is not None:
        a = sub(obj["apple"], "apple")
        for key in a:
            if key not in ("trusted_devices", "trusted_phone_numbers", "recovery_key"):
                raise InvalidRecord(f"apple.{key}", "unknown field")
        apple = AppleConfig(
            trusted_devices=ids(a.get("trusted_devices"), "apple.trusted_devices"),
            trusted_phone_numbers=ids(
                a.get("trusted_phone_numbers"), "apple.trusted_phone_numbers"
            ),
            recovery_key=flag(a.get("recovery_key"), "apple.recovery_key"),
        )

    record = UserAccountRecord(
        provider=provider,
        devices=tuple(devices),
        password_access=password_access,
        google=google,
        apple=apple,
    )
    validate_record(record)
    return record


def record_to_json(record: UserAccountRecord) -> dict:
    out: dict = {
        "provider": record.provider,
        "devices": [
            {"id": d.id, "category": d.category, "label": d.label} for d in record.devices
        ],
        "password_access": {
            "memory": record.password_access.memory,
            "password_manager": record.password_access.password_manager,
            "browser_devices": list(record.password_access.browser_devices),
            "paper": record.password_access.paper,
        },
        "google": None,
        "apple": None,
    }
    if record.google is not None:
        g = record.google
        out["google"] = {
            "mfa_enabled": g.mfa_enabled,
            "prompts": list(g.prompts),
            "authenticator_app": list(g.authenticator_app),
            "backup_codes": g.backup_codes,
            "voice_text": list(g.voice_text),
            "security_key": list(g.security_key),
            "sign_in_by_phone": list(g.sign_in_by_phone),
            "recovery_phone": g.recovery_phone,
            "recovery_email": g.recovery_email,
        }
    if record.apple is not None:
        a = record.apple
        out["apple"] = {
            "trusted_devices": list(a.trusted_devices),
            "trusted_phone_numbers": list(a.trusted_phone_numbers),
            "recovery_key": a.recovery_key,
        }
    return out


def blank_record(provider: str) -> UserAccountRecord:
    if provider == GOOGLE:
        return UserAccountRecord(provider=GOOGLE, google=GoogleConfig())
    if provider == APPLE:
        return UserAccountRecord(provider=APPLE, apple=AppleConfig())
    raise InvalidRecord("provider", f"unknown provider {provider!r}")


def template_manifest(provider: str) -> dict:
    """Blank record plus a field list a form can be generated from."""
    record = blank_record(provider)
    common = [
        {"path": "password_access.memory", "kind": "bool", "label": "Password memorized"},
        {"path": "password_access.password_manager", "kind": "bool",
         "label": "Password in a password manager"},
        {"path": "password_access.browser_devices", "kind": "device_ids",
         "label": "Password stored in a browser on"},
        {"path": "password_access.paper", "kind": "bool", "label": "Password on paper"},
    ]
    if provider == GOOGLE:
        fields = common + [
            {"path": "google.mfa_enabled", "kind": "bool", "label": "2-step verification"},
            {"path": "google.prompts", "kind": "device_ids", "label": "Google prompts on"},
            {"path": "google.authenticator_app", "kind": "device_ids",
             "label": "Authenticator app on"},
            {"path": "google.backup_codes", "kind": "bool", "label": "Backup codes"},
            {"path": "google.voice_text", "kind": "device_ids",
             "label": "Voice or text message to", "categories": ["phone"]},
            {"path": "google.security_key", "kind": "device_ids", "label": "Security key",
             "categories": ["security_key"]},
            {"path": "google.sign_in_by_phone", "kind": "device_ids",
             "label": "Sign in by phone on", "categories": ["phone"]},
            {"path": "google.recovery_phone", "kind": "device_id",
             "label": "Recovery phone", "categories": ["phone"]},
            {"path": "google.recovery_email", "kind": "bool", "label": "Recovery email"},
        ]
    else:
        fields = common + [
            {"path": "apple.trusted_devices", "kind": "device_ids",
             "label": "Trusted devices"},
            {"path": "apple.trusted_phone_numbers", "kind": "device_ids",
             "label": "Trusted phone numbers", "categories": ["phone"]},
            {"path": "apple.recovery_key", "kind": "bool", "label": "Recovery key"},
        ]
    return {
        "provider": provider,
        "device_categories": list(DEVICE_CATEGORIES),
        "record": record_to_json(record),
        "fields": fields,
    }


# ---------------------------------------------------------------------------
# Cohort analysis.

@dataclass(frozen=True)
class UserAnalysis:
    index: int
    record: UserAccountRecord
    analysis: AccountAnalysis
    key_methods: tuple[str, ...]


@dataclass(frozen=True)
class CohortReport:
    users: tuple[UserAnalysis, ...]
    errors: tuple[tuple[int, str], ...]

    @property
    def security_histogram(self) -> dict[str, int]:
        counts = {level.token: 0 for level in SecurityLevel}
        for user in self.users:
            counts[user.analysis.security.token] += 1
        return counts

    @property
    def accessibility_histogram(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for user in self.users:
            bin_ = int(user.analysis.result.score.__floor__())
            counts[bin_] = counts.get(bin_, 0) + 1
        return dict(sorted(counts.items()))

    @property
    def security_bands(self) -> dict[str, int]:
        counts = {"red": 0, "yellow": 0, "green": 0}
        for user in self.users:
            counts[security_band(user.analysis.security)] += 1
        return counts

    @property
    def accessibility_bands(self) -> dict[str, int]:
        counts = {"red": 0, "yellow": 0, "green": 0}
        for user in self.users:
            counts[accessibility_band(user.analysis.result.score)] += 1
        return counts

    @property
    def at_risk(self) -> tuple[UserAnalysis, ...]:
        """Users one loss away from lockout (score at most 1)."""
        return tuple(u for u in self.users if u.analysis.result.score <= 1)

    @property
    def adoption(self) -> dict[str, dict[str, int]]:
        google = {
            "password_only": 0, "sign_in_by_phone": 0, "prompts": 0,
            "authenticator_app": 0, "backup_codes": 0, "voice_text": 0,
            "security_key": 0, "recovery_phone": 0, "recovery_email": 0,
        }
        apple = {"trusted_devices": 0, "trusted_phone_numbers": 0, "recovery_key": 0}
        for user in self.users:
            g, a = user.record.google, user.record.apple
            if g is not None:
                mfa = g.mfa_enabled
                signin_by_phone = bool(g.sign_in_by_phone) and not mfa
                google["sign_in_by_phone"] += signin_by_phone
                google["prompts"] += bool(mfa and g.prompts)
                google["authenticator_app"] += bool(mfa and g.authenticator_app)
                google["backup_codes"] += bool(mfa and g.backup_codes)
                google["voice_text"] += bool(mfa and g.voice_text)
                google["security_key"] += bool(mfa and g.security_key)
                google["recovery_phone"] += g.recovery_phone is not None
                google["recovery_email"] += g.recovery_email
                if not (mfa or signin_by_phone or g.recovery_phone or g.recovery_email):
                    google["password_only"] += 1
            if a is not None:
                apple["trusted_devices"] += bool(a.trusted_devices)
                apple["trusted_phone_numbers"] += bool(a.trusted_phone_numbers)
                apple["recovery_key"] += a.recovery_key
        return {"google": google, "apple": apple}


def batch_analyze(
    records: list[UserAccountRecord | None],
    leaf_policy: UnmappedLeafPolicy = UnmappedLeafPolicy.ABSTRACT,
    scoring_policy: ScoringPolicy = DEFAULT_POLICY,
) -> CohortReport:
    """Score every record; invalid ones land in the error list, not raise."""
    users: list[UserAnalysis] = []
    errors: list[tuple[int, str]] = []
    for index, record in enumerate(records):
        try:
            if record is None:
                raise InvalidRecord(f"records[{index}]", "unparsed record")
            graph = instantiate_user_graph(record)
            analysis = analyze_account(
                graph, ROOT_ACCOUNT,
                scoring_policy=scoring_policy, leaf_policy=leaf_policy,
            )
            users.append(
                UserAnalysis(
                    index=index,
                    record=record,
                    analysis=analysis,
                    key_methods=key_access_methods(analysis.result),
                )
            )
        except InvalidRecord as exc:
            errors.append((index, str(exc)))
    return CohortReport(users=tuple(users), errors=tuple(errors))


def batch_analyze_rows(
    rows: list[SurveyRow],
    leaf_policy: UnmappedLeafPolicy = UnmappedLeafPolicy.ABSTRACT,
    scoring_policy: ScoringPolicy = DEFAULT_POLICY,
) -> CohortReport:
    """Like batch_analyze but carries parse errors from survey rows through."""
    report = batch_analyze(
        [row.record for row in rows], leaf_policy, scoring_policy
    )
    errors = list(report.errors)
    by_index = {index: message for index, message in errors}
    for row in rows:
        if row.error is not None:
            by_index[row.index] = row.error
    return CohortReport(
        users=report.users,
        errors=tuple(sorted(by_index.items())),
    )


def cohort_report_json(report: CohortReport) -> dict:
    """JSON-ready cohort report: per-user reports plus aggregates."""
    return {
        "users": [
            {
                "index": user.index,
                "provider": user.record.provider,
                "key_access_methods": list(user.key_methods),
                **account_report(user.analysis, include_legacy=False),
            }
            for user in report.users
        ],
        "errors": [{"index": index, "error": message} for index, message in report.errors],
        "aggregates": {
            "count": len(report.users),
            "security_histogram": report.security_histogram,
            "security_bands": report.security_bands,
            "accessibility_histogram": {
                str(bin_): count for bin_, count in report.accessibility_histogram.items()
            },
            "accessibility_bands": report.accessibility_bands,
            "at_risk": [
                {
                    "index": user.index,
                    "score": str(user.analysis.result.score),
                    "key_access_methods": list(user.key_methods),
                }
                for user in report.at_risk
            ],
            "adoption": report.adoption,
        },
    }
