"""Case-fact extraction from natural-language case descriptions.

Two extractors produce raw attribute/value pairs: a deterministic
pattern extractor driven by a per-attribute phrase lexicon (no network,
no credentials), and a remote chat-completion extractor. Normalization
folds raw pairs onto the claim schema: keys tolerate CamelCase and
spacing variants, values are lowercased and underscored, and anything
outside an attribute's enumeration becomes "unknown" with a warning, so
the engine only ever sees enumerated constants or the unknown sentinel.
"""

from __future__ import annotations

import ast
import json
import os
import re
from dataclasses import dataclass
from typing import Mapping

import requests

from leasecheck.dsl.model import AttributeSpec, ClaimSchema
from leasecheck.engine import UNKNOWN, CaseFacts, make_case_facts
from leasecheck.errors import (
    CaseTooLongError,
    CredentialError,
    ExtractionTimeoutError,
    ExtractionTransportError,
    ExtractorConfigError,
    MalformedReplyError,
)

PATTERN = "pattern"
LLM = "llm"

ENDPOINT_ENV = "LLM_API_URL"
API_KEY_ENV = "LLM_API_KEY"
MODEL_ENV = "LLM_MODEL"


@dataclass(frozen=True)
class ExtractorConfig:
    """How to extract: deterministic patterns or a remote model."""

    kind: str = PATTERN
    endpoint: str | None = None
    api_key: str | None = None
    model: str = "default"
    timeout: float = 30.0
    retry_count: int = 1
    max_case_length: int | None = None

    @staticmethod
    def from_env(kind: str = LLM) -> "ExtractorConfig":
        """Read endpoint, credential, and model name from the
        LLM_API_URL / LLM_API_KEY / LLM_MODEL environment variables."""
        return ExtractorConfig(
            kind=kind,
            endpoint=os.environ.get(ENDPOINT_ENV),
            api_key=os.environ.get(API_KEY_ENV),
            model=os.environ.get(MODEL_ENV, "default"),
        )


@dataclass(frozen=True)
class ExtractionResult:
    """Raw pairs as extracted, their normalized CaseFacts, which
    extractor produced them, and the verbatim model reply for audit
    (empty for the pattern extractor)."""

    raw_pairs: Mapping[str, str]
    normalized: CaseFacts
    provenance: str
    audit: str
    warnings: tuple[str, ...]


def _require_llm_config(config: ExtractorConfig) -> None:
    if config.timeout <= 0:
        raise ExtractorConfigError("extractor timeout must be positive")
    if not config.endpoint:
        raise ExtractorConfigError(
            f"remote extraction needs an endpoint URL; set {ENDPOINT_ENV} or pass endpoint="
        )
    if not config.api_key:
        raise CredentialError(
            f"remote extraction needs a credential; set {API_KEY_ENV} or pass api_key="
        )


def _check_length(case_text: str, config: ExtractorConfig) -> None:
    if config.max_case_length is not None and len(case_text) > config.max_case_length:
        raise CaseTooLongError(
            f"case text is {len(case_text)} characters, over the configured "
            f"maximum of {config.max_case_length}"
        )


# --- pattern extractor ---------------------------------------------------


def _entries(*pairs: tuple[str, str]):
    return tuple((re.compile(pattern, re.IGNORECASE), value) for pattern, value in pairs)


# Ordered per-attribute lexicon; the first matching entry wins, so
# negated phrasings sit above the plain forms they contain.
_LEXICON: dict[str, tuple] = {
    "eviction_cause": _entries(
        (r"non-?payment", "nonpayment"),
        (r"behind on (?:the )?rent", "nonpayment"),
        (r"unpaid rent", "nonpayment"),
        (r"owes? .{0,24}rent", "nonpayment"),
        (r"not paid (?:the )?rent", "nonpayment"),
        (r"lease violation", "lease_violation"),
        (r"violat\w+ (?:the|his|her|their) lease", "lease_violation"),
        (r"breach\w* (?:of )?(?:the|his|her|their) lease", "lease_violation"),
        (r"owner[ -]occupancy", "owner_occupancy"),
        (r"move into the (?:apartment|unit)", "owner_occupancy"),
        (r"demoli\w+", "demolition"),
        (r"nuisance", "nuisance"),
        (r"holdover", "holdover"),
        (r"stay\w* (?:on )?(?:past|after|beyond) the (?:end of the )?lease", "holdover"),
        (r"lease (?:term )?(?:expired|ended|ran out)", "holdover"),
    ),
    "court_ruling": _entries(
        (r"not been presented before (?:a |the )?court", "false"),
        (r"no court ruling", "false"),
        (r"does not have a court ruling", "false"),
        (r"without (?:a )?court", "false"),
        (r"no (?:court )?ruling", "false"),
        (r"court has not ruled", "false"),
        (r"never went to court", "false"),
        (r"court (?:has )?ruled", "true"),
        (r"judge (?:has )?ruled", "true"),
        (r"obtained a court ruling", "true"),
        (r"court ruling", "true"),
        (r"court order\w*", "true"),
        (r"judgment of possession", "true"),
        (r"court (?:has )?(?:issued|granted)", "true"),
        (r"warrant of eviction was issued", "true"),
    ),
    "executioner": _entries(
        (r"no (?:one|officer) has (?:carried|come)", "null"),
        (r"not been carried out", "null"),
        (r"landlord (?:him|her|them)self", "landlord"),
        (r"landlord (?:has )?changed the locks", "landlord"),
        (r"changed the locks", "landlord"),
        (r"locked (?:me|him|her|them|the tenant) out", "landlord"),
        (r"landlord (?:physically )?(?:removed|threw|put) ", "landlord"),
        (r"landlord (?:carried|is carrying) out", "landlord"),
        (r"sheriff", "sheriff"),
        (r"marshal", "marshal"),
        (r"constable", "constable"),
        (r"asked (?:me |him |her |them )?to vacate", "null"),
        (r"asked (?:me |him |her |them )?to (?:leave|move out)", "null"),
        (r"told (?:me |him |her |them )?to (?:leave|vacate|move out)", "null"),
    ),
    "tenant_category": _entries(
        (r"not (?:in )?(?:a |any )?protected", "none"),
        (r"no protected category", "none"),
        (r"not disabled", "none"),
        (r"not a senior", "none"),
        (r"not elderly", "none"),
        (r"disabled", "disabled"),
        (r"disabilit\w+", "disabled"),
        (r"senior citizen", "senior_citizen"),
        (r"\bsenior\b", "senior_citizen"),
        (r"elderly", "senior_citizen"),
        (r"\b(?:7|8|9)\d[ -]years?[ -]old", "senior_citizen"),
        (r"long[ -]term tenant", "long_term"),
        (r"for (?:over|more than) (?:twenty|thirty|forty|\d{2,}) years", "long_term"),
    ),
    "signed_by_both": _entries(
        (r"only the (?:tenant|landlord) signed", "false"),
        (r"never signed", "false"),
        (r"not signed", "false"),
        (r"unsigned", "false"),
        (r"without signing", "false"),
        (r"no signature", "false"),
        (r"signed by both", "true"),
        (r"both (?:parties|of us|of them) signed", "true"),
        (r"both signed", "true"),
        (r"landlord and (?:the )?tenant (?:both )?signed", "true"),
        (r"signatures of both", "true"),
    ),
    "term_over_one_year": _entries(
        (r"(?:longer|more) than (?:one|a) year", "true"),
        (r"(?:two|three|four|five)[ -]year (?:lease|term)", "true"),
        (r"multi[ -]year", "true"),
        (r"one[ -]year (?:lease|term)", "false"),
        (r"lease of one year", "false"),
        (r"(?:six|three)[ -]month", "false"),
        (r"month[ -]to[ -]month", "false"),
        (r"one year or less", "false"),
    ),
    "deposit_exceeds_one_month": _entries(
        (r"(?:two|three|four|five|six) months'? (?:rent|worth)[^.]{0,40}deposit", "true"),
        (r"deposit (?:of|equal to|worth) (?:two|three|four|five|six) months", "true"),
        (r"deposit exceed\w* one month", "true"),
        (r"more than one month'?s rent as", "true"),
        (r"one month'?s rent[^.]{0,40}deposit", "false"),
        (r"deposit (?:of|equal to|worth) one month", "false"),
        (r"one month'?s (?:security )?deposit", "false"),
    ),
    "units_in_building": _entries(
        (r"(?<![\w-])(?:two|three|four|five) (?:residential |rental )?units", "fewer_than_six"),
        (r"(?<!\d)[2-5] (?:residential |rental )?units", "fewer_than_six"),
        (r"fewer than six", "fewer_than_six"),
        (r"single[ -]family", "fewer_than_six"),
        (r"two[ -]family", "fewer_than_six"),
        (r"duplex", "fewer_than_six"),
        (r"(?<![\w-])(?:six|seven|eight|nine|ten|eleven|twelve|twenty|thirty) (?:residential |rental )?units", "six_or_more"),
        (r"(?<!\d)(?:[6-9]|\d{2,}) (?:residential |rental )?units", "six_or_more"),
        (r"six or more", "six_or_more"),
    ),
    "built_before_1974": _entries(
        (r"built (?:in|around) 19(?:[0-6]\d|7[0-3])", "true"),
        (r"constructed (?:in|around) 19(?:[0-6]\d|7[0-3])", "true"),
        (r"built before 1974", "true"),
        (r"pre-?war", "true"),
        (r"built (?:in|around) (?:19(?:7[4-9]|[89]\d)|20\d\d)", "false"),
        (r"constructed (?:in|around) (?:19(?:7[4-9]|[89]\d)|20\d\d)", "false"),
        (r"built after 1974", "false"),
        (r"new construction", "false"),
    ),
    "increase_within_guideline": _entries(
        (r"(?:exceeds?|above|beyond|over) the (?:lawful |legal )?guideline", "false"),
        (r"exceeds? the legal limit", "false"),
        (r"doubled the rent", "false"),
        (r"within the (?:lawful |legal )?guideline", "true"),
        (r"within the legal limit", "true"),
        (r"matches the guideline", "true"),
    ),
    "issue_type": _entries(
        (r"no heat(?:ing)?\b", "no_heat"),
        (r"without heat\b", "no_heat"),
        (r"heat(?:ing)? (?:has )?(?:stopped|been off|failed)", "no_heat"),
        (r"no hot water", "no_hot_water"),
        (r"without hot water", "no_hot_water"),
        (r"hot water (?:has )?(?:stopped|been off|failed)", "no_hot_water"),
        (r"cockroach\w*", "pest_infestation"),
        (r"roach\w*", "pest_infestation"),
        (r"\bmice\b", "pest_infestation"),
        (r"\brats?\b", "pest_infestation"),
        (r"rodent\w*", "pest_infestation"),
        (r"bed ?bugs?", "pest_infestation"),
        (r"infestation", "pest_infestation"),
        (r"lead(?:-based)? paint", "lead_paint"),
        (r"cosmetic", "minor_cosmetic"),
        (r"scuffed", "minor_cosmetic"),
        (r"faded paint", "minor_cosmetic"),
        (r"small crack", "minor_cosmetic"),
    ),
    "landlord_notified": _entries(
        (r"never (?:told|notified|informed)", "false"),
        (r"did not (?:tell|notify|inform)", "false"),
        (r"didn'?t (?:tell|notify|inform)", "false"),
        (r"has not been (?:told|notified|informed)", "false"),
        (r"not informed", "false"),
        (r"without notifying", "false"),
        (r"notified the landlord", "true"),
        (r"informed the landlord", "true"),
        (r"told the landlord", "true"),
        (r"wrote to the landlord", "true"),
        (r"complained to the landlord", "true"),
        (r"reported (?:it|the \w+) to the landlord", "true"),
        (r"landlord (?:was|has been) (?:notified|informed|told)", "true"),
    ),
    "repaired_promptly": _entries(
        (r"never (?:repaired|fixed)", "false"),
        (r"not (?:been )?(?:repaired|fixed)", "false"),
        (r"no repairs", "false"),
        (r"failed to (?:repair|fix)", "false"),
        (r"has(?:n'?t| not) (?:repaired|fixed)", "false"),
        (r"ignored the (?:complaint|problem|report)", "false"),
        (r"(?:repaired|fixed) (?:it )?within", "true"),
        (r"promptly (?:repaired|fixed)", "true"),
        (r"(?:repaired|fixed) (?:it )?promptly", "true"),
        (r"(?:repaired|fixed) (?:it )?(?:the next day|immediately|right away|quickly)", "true"),
    ),
}

# too generic to use as bare fallback keywords
_GENERIC_VALUES = frozenset({"true", "false", "null", "none", UNKNOWN})


def _match_attribute(case_text: str, attr: AttributeSpec) -> str:
    for regex, value in _LEXICON.get(attr.name, ()):
        if regex.search(case_text):
            return value
    for value in attr.domain:
        if value in _GENERIC_VALUES:
            continue
        phrase = re.escape(value).replace("_", "[ _-]")
        if re.search(rf"(?<!\w){phrase}(?!\w)", case_text, re.IGNORECASE):
            return value
    return UNKNOWN


def pattern_extract(case_text: str, schema: ClaimSchema) -> dict[str, str]:
    """Deterministic offline extraction: scan the case text with each
    attribute's phrase lexicon, falling back to literal enumeration
    constants; attributes with no hit map to "unknown"."""
    # hard-wrapped input must match single-space lexicon phrases
    flat = re.sub(r"\s+", " ", case_text)
    return {attr.name: _match_attribute(flat, attr) for attr in schema.attributes}


# --- normalization -------------------------------------------------------


def _fold_key(key: str) -> str:
    folded = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", "_", key.strip())
    folded = re.sub(r"[\s\-]+", "_", folded)
    return folded.lower()


def _fold_value(value: str) -> str:
    folded = value.strip().strip("\"'").strip()
    return re.sub(r"[\s\-]+", "_", folded).lower()


def normalize(
    raw_pairs: Mapping[str, str], schema: ClaimSchema
) -> tuple[CaseFacts, tuple[str, ...]]:
    """Fold raw pairs onto the schema. Always succeeds; problems become
    warnings and the affected attributes become "unknown"."""
    warnings: list[str] = []
    values: dict[str, str] = {}
    for key, value in raw_pairs.items():
        name = _fold_key(str(key))
        attr = schema.attribute(name)
        if attr is None:
            warnings.append(f"ignoring unrecognized attribute {key!r}")
            continue
        folded = _fold_value(str(value))
        if folded == UNKNOWN:
            values[name] = UNKNOWN
        elif folded in attr.domain:
            values[name] = folded
        else:
            warnings.append(
                f"{name}: value {value!r} is outside the enumeration; treating as unknown"
            )
            values[name] = UNKNOWN
    facts = make_case_facts(schema, values)
    return facts, tuple(warnings)


# --- remote extractor ----------------------------------------------------


def build_prompt(schema: ClaimSchema) -> str:
    """System prompt asking for one flat JSON map of the schema's
    attributes; a pure function of the schema."""
    lines = [
        "You extract structured facts from New York landlord-tenant case descriptions.",
        f"Claim type: {schema.claim_type}. Determine these attributes:",
        "",
    ]
    for attr in schema.attributes:
        lines.append(f"- {attr.name}: one of {', '.join(attr.domain)}")
    lines += [
        "",
        "Reply with exactly one flat JSON object that maps every attribute",
        'name above to its value. Use "unknown" for any attribute the case',
        "text does not determine. Reply with the JSON object only.",
    ]
    return "\n".join(lines)


def _stringify(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _parse_map(block: str) -> dict[str, str] | None:
    for loader in (json.loads, ast.literal_eval):
        try:
            parsed = loader(block)
        except Exception:
            continue
        if isinstance(parsed, dict) and all(
            not isinstance(v, (dict, list, tuple, set)) for v in parsed.values()
        ):
            return {str(k): _stringify(v) for k, v in parsed.items()}
    return None


def _first_map_block(text: str) -> dict[str, str] | None:
    start = text.find("{")
    while start != -1:
        depth = 0
        for i in range(start, len(text)):
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
                if depth == 0:
                    parsed = _parse_map(text[start : i + 1])
                    if parsed is not None:
                        return parsed
                    break
        start = text.find("{", start + 1)
    return None


def _post_chat(config: ExtractorConfig, messages: list[dict]) -> str:
    payload = {"model": config.model, "messages": messages}
    headers = {"Authorization": f"Bearer {config.api_key}"}
    try:
        response = requests.post(
            config.endpoint, json=payload, headers=headers, timeout=config.timeout
        )
    except requests.Timeout as err:
        raise ExtractionTimeoutError(
            f"model endpoint did not answer within {config.timeout}s"
        ) from err
    except requests.RequestException as err:
        raise ExtractionTransportError(f"cannot reach model endpoint: {err}") from err
    if response.status_code in (401, 403):
        raise CredentialError(
            f"model endpoint rejected credentials (HTTP {response.status_code})"
        )
    if response.status_code >= 400:
        raise ExtractionTransportError(
            f"model endpoint returned HTTP {response.status_code}"
        )
    try:
        return response.json()["choices"][0]["message"]["content"]
    except (ValueError, LookupError, TypeError) as err:
        raise MalformedReplyError(
            f"model endpoint reply is not chat-completion shaped: {err}"
        ) from err


_CORRECTION = (
    "Your previous reply could not be parsed. Reply again with exactly one "
    "flat JSON object mapping each attribute name to its value, and nothing else."
)


def llm_extract(
    case_text: str, schema: ClaimSchema, config: ExtractorConfig
) -> tuple[dict[str, str], str]:
    """Ask the remote model for raw pairs. Returns (raw_pairs, verbatim
    last reply). Unparseable replies are retried with a corrective
    instruction up to config.retry_count times; transport, credential,
    and persistent-malformation failures raise distinct errors."""
    _require_llm_config(config)
    _check_length(case_text, config)
    messages = [
        {"role": "system", "content": build_prompt(schema)},
        {"role": "user", "content": case_text},
    ]
    attempts = config.retry_count + 1
    reply = ""
    for _ in range(attempts):
        reply = _post_chat(config, messages)
        pairs = _first_map_block(reply)
        if pairs is not None:
            return pairs, reply
        messages = messages + [
            {"role": "assistant", "content": reply},
            {"role": "user", "content": _CORRECTION},
        ]
    raise MalformedReplyError(
        f"no parseable attribute map after {attempts} attempt(s); "
        f"last reply started: {reply[:120]!r}"
    )


def extract(
    case_text: str, schema: ClaimSchema, config: ExtractorConfig | None = None
) -> ExtractionResult:
    """Run the configured extractor and normalize its output."""
    config = config or ExtractorConfig()
    _check_length(case_text, config)
    if config.kind == PATTERN:
        raw: Mapping[str, str] = pattern_extract(case_text, schema)
        audit = ""
    elif config.kind == LLM:
        raw, audit = llm_extract(case_text, schema, config)
    else:
        raise ExtractorConfigError(f"unknown extractor kind {config.kind!r}")
    facts, warnings = normalize(raw, schema)
    return ExtractionResult(dict(raw), facts, config.kind, audit, warnings)
