/** Browser entry point: mounts the controller on #app and wires events.
 *
 * All clicks are delegated through data-action attributes, so the
 * rendered markup is the single place that defines what is clickable.
 */

import { ApiClient } from "./api.js";
import { Controller } from "./controller.js";
import { view } from "./view.js";

function mount(root: HTMLElement): void {
  const controller = new Controller(new ApiClient(""), (state) => {
    root.innerHTML = view(state);
  });

  root.addEventListener("click", (event) => {
    const origin = event.target;
    if (!(origin instanceof Element)) {
      return;
    }
    const target = origin.closest("[data-action]");
    if (!(target instanceof HTMLElement) || target.hasAttribute("disabled")) {
      return;
    }
    switch (target.dataset.action) {
      case "retry-start":
        void controller.start();
        break;
      case "pick-claim":
        controller.pickClaim(target.dataset.claim ?? "");
        break;
      case "mode-case":
        controller.chooseCaseEntry();
        break;
      case "mode-interview":
        void controller.beginInterview();
        break;
      case "analyze":
        void controller.runAnalyze();
        break;
      case "answer":
        void controller.submitAnswer(target.dataset.value ?? "");
        break;
      case "finalize":
        void controller.finalize();
        break;
      case "revise": {
        const attribute = target.dataset.attr ?? "";
        const select = root.querySelector(`select[data-revise="${attribute}"]`);
        if (select instanceof HTMLSelectElement) {
          void controller.revise(attribute, select.value);
        }
        break;
      }
      case "reopen":
        controller.reopen();
        break;
      case "back-to-mode":
        controller.backToMode();
        break;
      case "start-over":
        controller.startOver();
        break;
    }
  });

  root.addEventListener("input", (event) => {
    const target = event.target;
    if (target instanceof HTMLTextAreaElement && target.dataset.input === "case-text") {
      controller.editCaseText(target.value);
    }
  });

  void controller.start();
}

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
mount(root);
