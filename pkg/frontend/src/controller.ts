/** Async orchestration between the API client and the pure view-model.
 *
 * The controller owns the current AppState, performs the network calls,
 * and feeds results through the transition functions in state.ts. The
 * server stays the source of truth: answers are never recorded locally
 * before the gateway accepts them, and rejected answers leave the session
 * exactly as it was, with the rejection message surfaced inline.
 */

import { ApiClient, ApiError } from "./api.js";
import type { ClaimSummary } from "./api.js";
import * as vm from "./state.js";

const EMPTY_CASE_PROMPT =
  "Enter a case description first, or go back and answer questions instead.";
const SESSION_EXPIRED_NOTICE = "That interview session is gone. Start a fresh one.";

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

function isSessionLoss(error: unknown): boolean {
  return error instanceof ApiError && error.status === 404 && error.code === "unknown_session";
}

export class Controller {
  state: vm.AppState = vm.initialState;
  private claims: ClaimSummary[] = [];

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: vm.AppState) => void = () => {},
  ) {}

  private set(next: vm.AppState): void {
    this.state = next;
    this.onChange(next);
  }

  async start(): Promise<void> {
    this.set(vm.initialState);
    try {
      this.claims = await this.api.claims();
      this.set(vm.claimsLoaded(this.claims));
    } catch (error) {
      this.set(vm.loadFailed(describe(error)));
    }
  }

  pickClaim(claimType: string): void {
    this.set(vm.pickClaim(this.state, claimType));
  }

  chooseCaseEntry(): void {
    this.set(vm.chooseCaseEntry(this.state));
  }

  backToMode(): void {
    this.set(vm.backToMode(this.state));
  }

  startOver(): void {
    this.set(vm.claimsLoaded(this.claims));
  }

  /** Quiet update: the textarea already shows the typed text, and a
   * re-render here would replace the element and drop the caret. */
  editCaseText(text: string): void {
    this.state = vm.editCaseText(this.state, text);
  }

  async runAnalyze(): Promise<void> {
    if (this.state.kind !== "case_entry" || this.state.busy) {
      return;
    }
    const { claim, text } = this.state;
    if (text.trim() === "") {
      this.set(vm.analyzeFailed(this.state, EMPTY_CASE_PROMPT));
      return;
    }
    this.set(vm.beginAnalyze(this.state));
    try {
      const result = await this.api.analyze(claim.claim_type, text);
      this.set(vm.analyzeSucceeded(this.state, result));
    } catch (error) {
      this.set(vm.analyzeFailed(this.state, describe(error)));
    }
  }

  async beginInterview(caseText?: string): Promise<void> {
    if (this.state.kind !== "mode") {
      return;
    }
    const claim = this.state.claim;
    try {
      const session = await this.api.startInterview(claim.claim_type, caseText);
      this.set(vm.interviewStarted(claim, session));
    } catch (error) {
      this.set({ kind: "mode", claim, notice: describe(error) });
    }
  }

  async submitAnswer(value: string): Promise<void> {
    if (this.state.kind !== "interview" || this.state.busy) {
      return;
    }
    const session = this.state.session;
    const question = session.question;
    if (question === null) {
      return;
    }
    this.set(vm.requestSubmitted(this.state));
    try {
      const updated = await this.api.answer(session.session_id, question.attribute, value);
      this.set(vm.answerAccepted(this.state, updated));
    } catch (error) {
      if (isSessionLoss(error)) {
        this.set(vm.sessionExpired(this.state, SESSION_EXPIRED_NOTICE));
      } else {
        this.set(vm.answerRejected(this.state, describe(error)));
      }
    }
  }

  async revise(attribute: string, value: string): Promise<void> {
    if (this.state.kind === "verdict") {
      this.set(vm.reopenInterview(this.state));
    }
    if (this.state.kind !== "interview" || this.state.busy) {
      return;
    }
    const session = this.state.session;
    this.set(vm.requestSubmitted(this.state));
    try {
      const updated = await this.api.answer(session.session_id, attribute, value, true);
      this.set(vm.answerAccepted(this.state, updated));
    } catch (error) {
      if (isSessionLoss(error)) {
        this.set(vm.sessionExpired(this.state, SESSION_EXPIRED_NOTICE));
      } else {
        this.set(vm.answerRejected(this.state, describe(error)));
      }
    }
  }

  async finalize(): Promise<void> {
    if (this.state.kind !== "interview" || this.state.busy) {
      return;
    }
    const session = this.state.session;
    if (!vm.canFinalize(session)) {
      const missing = session.pending.join(", ");
      this.set(vm.finalizeRefused(this.state, `Answer the remaining questions first: ${missing}`));
      return;
    }
    this.set(vm.requestSubmitted(this.state));
    try {
      const result = await this.api.finalize(session.session_id);
      this.set(vm.finalized(this.state, result));
    } catch (error) {
      if (isSessionLoss(error)) {
        this.set(vm.sessionExpired(this.state, SESSION_EXPIRED_NOTICE));
      } else {
        this.set(vm.finalizeRefused(this.state, describe(error)));
      }
    }
  }

  reopen(): void {
    this.set(vm.reopenInterview(this.state));
  }
}
