/** Pure rendering: view(state) returns the full HTML for the app root.
 *
 * Rendering is schema driven. Question prompts, option lists, answered
 * pairs, citations, and verdict text all come straight from the gateway
 * payloads held in the state; the only strings authored here are layout
 * labels. Everything dynamic passes through esc() before it reaches the
 * markup, so the renderer is safe to exercise with arbitrary text.
 */

import type { AttributeSchema, ClaimSummary, SessionView, Verdict } from "./api.js";
import type {
  AppState,
  CaseEntryState,
  InterviewState,
  ModeState,
  PickerState,
  VerdictState,
} from "./state.js";
import { canFinalize } from "./state.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function heading(claimType: string): string {
  return esc(claimType.replace(/_/g, " "));
}

function banner(message: string, role: string): string {
  return `<p class="banner" data-role="${role}">${esc(message)}</p>`;
}

function backButton(label: string, action: string): string {
  return `<button class="link" data-action="${action}">${esc(label)}</button>`;
}

function renderLoading(): string {
  return `<section class="pane"><p>Contacting the gateway...</p></section>`;
}

function renderFatal(message: string): string {
  return [
    `<section class="pane">`,
    banner(message, "fatal-error"),
    `<button data-action="retry-start">Retry</button>`,
    `</section>`,
  ].join("\n");
}

function renderPicker(state: PickerState): string {
  const rows = state.claims
    .map(
      (claim) =>
        `<li><button data-action="pick-claim" data-claim="${esc(claim.claim_type)}">` +
        `${heading(claim.claim_type)}</button>` +
        `<span class="law-count">${claim.law_count} laws</span></li>`,
    )
    .join("\n");
  return [
    `<section class="pane">`,
    `<h2>What do you want to check?</h2>`,
    `<ul class="claim-list">`,
    rows,
    `</ul>`,
    `</section>`,
  ].join("\n");
}

function renderMode(state: ModeState): string {
  const parts = [`<section class="pane">`, `<h2>${heading(state.claim.claim_type)}</h2>`];
  if (state.notice !== null) {
    parts.push(banner(state.notice, "notice"));
  }
  parts.push(
    `<p>How do you want to provide the facts?</p>`,
    `<div class="choices">`,
    `<button data-action="mode-case">Paste a case description</button>`,
    `<button data-action="mode-interview">Answer questions</button>`,
    `</div>`,
    backButton("Back to claim types", "start-over"),
    `</section>`,
  );
  return parts.join("\n");
}

function renderCaseEntry(state: CaseEntryState): string {
  const parts = [
    `<section class="pane">`,
    `<h2>${heading(state.claim.claim_type)}: case description</h2>`,
    `<textarea data-input="case-text" rows="10"` +
      ` placeholder="Describe the situation in plain English.">${esc(state.text)}</textarea>`,
    `<div class="actions">`,
    `<button data-action="analyze"${state.busy ? " disabled" : ""}>Analyze</button>`,
    backButton("Back", "back-to-mode"),
    `</div>`,
  ];
  if (state.error !== null) {
    parts.push(banner(state.error, "analyze-error"));
  }
  if (state.busy) {
    parts.push(`<p class="muted">Analyzing...</p>`);
  }
  parts.push(`</section>`);
  return parts.join("\n");
}

function attributeSchema(claim: ClaimSummary, name: string): AttributeSchema | undefined {
  return claim.attributes.find((attribute) => attribute.name === name);
}

function renderAnsweredRows(claim: ClaimSummary, session: SessionView, busy: boolean): string {
  const names = claim.attributes
    .map((attribute) => attribute.name)
    .filter((name) => session.answered[name] !== undefined);
  if (names.length === 0) {
    return "";
  }
  const rows = names
    .map((name) => {
      const value = session.answered[name] ?? "";
      const schema = attributeSchema(claim, name);
      const options = (schema?.options ?? [value])
        .map(
          (option) =>
            `<option value="${esc(option)}"${option === value ? " selected" : ""}>` +
            `${esc(option)}</option>`,
        )
        .join("");
      return (
        `<div class="answered-row">` +
        `<span class="attr">${esc(name)}</span>` +
        `<select data-revise="${esc(name)}"${busy ? " disabled" : ""}>${options}</select>` +
        `<button data-action="revise" data-attr="${esc(name)}"${busy ? " disabled" : ""}>` +
        `Change</button>` +
        `</div>`
      );
    })
    .join("\n");
  return [`<h3>Your answers so far</h3>`, `<div class="answered">`, rows, `</div>`].join("\n");
}

function renderQuestion(state: InterviewState): string {
  const question = state.session.question;
  if (question === null) {
    return `<p class="muted">All questions answered.</p>`;
  }
  const options = question.options
    .map(
      (option) =>
        `<button data-action="answer" data-value="${esc(option)}"` +
        `${state.busy ? " disabled" : ""}>${esc(option)}</button>`,
    )
    .join("\n");
  return [
    `<div class="question" data-attribute="${esc(question.attribute)}">`,
    `<p class="prompt">${esc(question.prompt)}</p>`,
    `<div class="options">`,
    options,
    `</div>`,
    `</div>`,
  ].join("\n");
}

function renderFinalizeControls(state: InterviewState): string {
  const ready = canFinalize(state.session) && !state.busy;
  const parts = [
    `<div class="finalize">`,
    `<button data-action="finalize"${ready ? "" : " disabled"}>Finalize</button>`,
  ];
  if (state.session.pending.length > 0) {
    const missing = state.session.pending.join(", ");
    parts.push(`<span class="hint" data-role="finalize-hint">Still unanswered: ${esc(missing)}</span>`);
  }
  if (state.finalizeHint !== null) {
    parts.push(banner(state.finalizeHint, "finalize-error"));
  }
  parts.push(`</div>`);
  return parts.join("\n");
}

function renderInterview(state: InterviewState): string {
  const parts = [
    `<section class="pane">`,
    `<h2>${heading(state.claim.claim_type)}: interview</h2>`,
  ];
  for (const warning of state.session.warnings) {
    parts.push(banner(warning, "session-warning"));
  }
  parts.push(
    renderAnsweredRows(state.claim, state.session, state.busy),
    renderQuestion(state),
    state.answerError === null ? "" : banner(state.answerError, "answer-error"),
    renderFinalizeControls(state),
    backButton("Abandon interview", "back-to-mode"),
    `</section>`,
  );
  return parts.filter((part) => part !== "").join("\n");
}

function renderCitations(verdict: Verdict): string {
  const rows = verdict.citations
    .map(
      (law) =>
        `<li><span class="law-text">${esc(law.text)}</span>` +
        ` <span class="law-source">(${esc(law.id)}, ${esc(law.source)})</span></li>`,
    )
    .join("\n");
  return [`<h3>Cited laws</h3>`, `<ol class="citations">`, rows, `</ol>`].join("\n");
}

function renderTrace(verdict: Verdict): string {
  if (verdict.trace.length === 0) {
    return "";
  }
  const rows = verdict.trace
    .map((step) => {
      const body = step.body
        .map(([literal, status]) => `<li>${esc(literal)} <em>[${esc(status)}]</em></li>`)
        .join("");
      return (
        `<li><code>${esc(step.rule_id)}</code> concluded <code>${esc(step.head)}</code>` +
        (body === "" ? "" : `<ul>${body}</ul>`) +
        `</li>`
      );
    })
    .join("\n");
  return [
    `<details class="trace" data-role="trace">`,
    `<summary>Rule trace (${verdict.trace.length} firings)</summary>`,
    `<ol>`,
    rows,
    `</ol>`,
    `</details>`,
  ].join("\n");
}

function renderVerdict(state: VerdictState): string {
  const verdict = state.verdict;
  const parts = [
    `<section class="pane">`,
    `<h2>${heading(state.claim.claim_type)}: verdict</h2>`,
    renderCitations(verdict),
    `<p class="verdict-line outcome-${esc(verdict.outcome)}" data-role="verdict-line">` +
      `<strong>${esc(verdict.message)}</strong></p>`,
    `<p class="outcome-badge outcome-${esc(verdict.outcome)}">${esc(verdict.outcome)}</p>`,
  ];
  if (verdict.missing_attributes.length > 0) {
    parts.push(
      `<p class="muted">Unknown attributes: ${esc(verdict.missing_attributes.join(", "))}</p>`,
    );
  }
  parts.push(renderTrace(verdict));
  if (state.extraction !== null) {
    const pairs = Object.entries(state.extraction.raw_pairs)
      .map(([name, value]) => `<li>${esc(name)}: ${esc(value)}</li>`)
      .join("");
    parts.push(
      `<details class="extraction"><summary>Extracted facts (${esc(state.extraction.provenance)})</summary>`,
      `<ul>${pairs}</ul>`,
      state.extraction.warnings.map((warning) => banner(warning, "extraction-warning")).join("\n"),
      `</details>`,
    );
  }
  if (state.session !== null) {
    parts.push(`<button data-action="reopen"${state.busy ? " disabled" : ""}>Revise answers</button>`);
  }
  parts.push(backButton("Start over", "start-over"), `</section>`);
  return parts.filter((part) => part !== "").join("\n");
}

export function view(state: AppState): string {
  const body = (() => {
    switch (state.kind) {
      case "loading":
        return renderLoading();
      case "fatal":
        return renderFatal(state.message);
      case "picker":
        return renderPicker(state);
      case "mode":
        return renderMode(state);
      case "case_entry":
        return renderCaseEntry(state);
      case "interview":
        return renderInterview(state);
      case "verdict":
        return renderVerdict(state);
    }
  })();
  return [
    `<header><h1>Tenancy compliance checker</h1>`,
    `<p class="tagline">New York tenancy rules, applied to your facts.</p></header>`,
    `<main>`,
    body,
    `</main>`,
  ].join("\n");
}
