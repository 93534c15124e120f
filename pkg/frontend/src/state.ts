/** Pure view-model for the single-page client.
 *
 * Every transition is a plain function from one state value to the next;
 * nothing here touches the network or the DOM, and nothing here computes
 * legal outcomes. Verdict strings are stored exactly as the gateway sent
 * them, and answered/pending sets always mirror the latest server session
 * view, so the UI can never show an answer the server has not accepted.
 */

import type {
  AnalyzeResult,
  ClaimSummary,
  Extraction,
  FinalizeResult,
  SessionView,
  Verdict,
} from "./api.js";

export type Mode = "case" | "interview";

export interface LoadingState {
  kind: "loading";
}

export interface FatalState {
  kind: "fatal";
  message: string;
}

export interface PickerState {
  kind: "picker";
  claims: ClaimSummary[];
}

export interface ModeState {
  kind: "mode";
  claim: ClaimSummary;
  notice: string | null;
}

export interface CaseEntryState {
  kind: "case_entry";
  claim: ClaimSummary;
  text: string;
  busy: boolean;
  error: string | null;
}

export interface InterviewState {
  kind: "interview";
  claim: ClaimSummary;
  session: SessionView;
  answerError: string | null;
  finalizeHint: string | null;
  busy: boolean;
}

export interface VerdictState {
  kind: "verdict";
  claim: ClaimSummary;
  mode: Mode;
  verdict: Verdict;
  extraction: Extraction | null;
  session: SessionView | null;
  busy: boolean;
}

export type AppState =
  | LoadingState
  | FatalState
  | PickerState
  | ModeState
  | CaseEntryState
  | InterviewState
  | VerdictState;

export const initialState: AppState = { kind: "loading" };

export function canFinalize(session: SessionView): boolean {
  return session.pending.length === 0;
}

export function claimsLoaded(claims: ClaimSummary[]): AppState {
  return { kind: "picker", claims };
}

export function loadFailed(message: string): AppState {
  return { kind: "fatal", message };
}

export function pickClaim(state: AppState, claimType: string): AppState {
  if (state.kind !== "picker") {
    return state;
  }
  const claim = state.claims.find((entry) => entry.claim_type === claimType);
  if (claim === undefined) {
    return state;
  }
  return { kind: "mode", claim, notice: null };
}

export function backToMode(state: AppState): AppState {
  if (
    state.kind !== "case_entry" &&
    state.kind !== "interview" &&
    state.kind !== "verdict"
  ) {
    return state;
  }
  return { kind: "mode", claim: state.claim, notice: null };
}

export function chooseCaseEntry(state: AppState): AppState {
  if (state.kind !== "mode") {
    return state;
  }
  return { kind: "case_entry", claim: state.claim, text: "", busy: false, error: null };
}

export function editCaseText(state: AppState, text: string): AppState {
  if (state.kind !== "case_entry" || state.busy) {
    return state;
  }
  return { ...state, text };
}

export function beginAnalyze(state: AppState): AppState {
  if (state.kind !== "case_entry") {
    return state;
  }
  return { ...state, busy: true, error: null };
}

export function analyzeFailed(state: AppState, message: string): AppState {
  if (state.kind !== "case_entry") {
    return state;
  }
  return { ...state, busy: false, error: message };
}

export function analyzeSucceeded(state: AppState, result: AnalyzeResult): AppState {
  if (state.kind !== "case_entry") {
    return state;
  }
  return {
    kind: "verdict",
    claim: state.claim,
    mode: "case",
    verdict: result,
    extraction: result.extraction,
    session: null,
    busy: false,
  };
}

export function interviewStarted(claim: ClaimSummary, session: SessionView): AppState {
  return {
    kind: "interview",
    claim,
    session,
    answerError: null,
    finalizeHint: null,
    busy: false,
  };
}

export function requestSubmitted(state: AppState): AppState {
  if (state.kind === "interview" || state.kind === "verdict") {
    return { ...state, busy: true };
  }
  return state;
}

export function answerAccepted(state: AppState, session: SessionView): AppState {
  if (state.kind !== "interview") {
    return state;
  }
  return { ...state, session, answerError: null, finalizeHint: null, busy: false };
}

export function answerRejected(state: AppState, message: string): AppState {
  if (state.kind !== "interview") {
    return state;
  }
  return { ...state, answerError: message, busy: false };
}

export function finalizeRefused(state: AppState, message: string): AppState {
  if (state.kind !== "interview") {
    return state;
  }
  return { ...state, finalizeHint: message, busy: false };
}

export function finalized(state: AppState, result: FinalizeResult): AppState {
  if (state.kind !== "interview") {
    return state;
  }
  return {
    kind: "verdict",
    claim: state.claim,
    mode: "interview",
    verdict: result.verdict,
    extraction: null,
    session: { ...state.session, state: result.state },
    busy: false,
  };
}

export function reopenInterview(state: AppState): AppState {
  if (state.kind !== "verdict" || state.session === null) {
    return state;
  }
  return {
    kind: "interview",
    claim: state.claim,
    session: state.session,
    answerError: null,
    finalizeHint: null,
    busy: false,
  };
}

export function sessionExpired(state: AppState, message: string): AppState {
  if (state.kind !== "interview" && state.kind !== "verdict") {
    return state;
  }
  return { kind: "mode", claim: state.claim, notice: message };
}
