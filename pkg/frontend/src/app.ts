// Controller: wires DOM events to service calls. One user action issues at
// most one request; the response payload fully replaces the rendered state
// (no optimistic updates), so the view always equals the server's view.
// The session id lives in the URL hash — reloading re-fetches the same
// session and renders identically.

import { ApiClient, ServiceError } from "./api.js";
import {
  defaultTab,
  renderErrorBanner,
  renderExampleDetail,
  renderPatternPicker,
  renderSession,
  type ViewState,
} from "./render.js";
import type { SessionPayload, SyntaxType } from "./wire.js";

const DEFAULT_EXAMPLES = 10;

interface AppState {
  payload: SessionPayload | null;
  view: ViewState;
  exampleCount: number;
  busy: boolean;
}

function parseContext(raw: string): [string, string][] {
  return raw
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => {
      const [name, type] = part.split(":").map((s) => s.trim());
      if (!name || !type) throw new Error(`context entry ${part!} must be name: Type`);
      return [name, type] as [string, string];
    });
}

export function startApp(root: Document, client: ApiClient): void {
  const pickerMount = root.getElementById("patterns")!;
  const sessionMount = root.getElementById("session")!;
  const detailMount = root.getElementById("detail")!;
  const errorMount = root.getElementById("errors")!;

  const state: AppState = {
    payload: null,
    view: { activeTabs: {} },
    exampleCount: DEFAULT_EXAMPLES,
    busy: false,
  };

  function showError(err: unknown): void {
    if (err instanceof ServiceError) {
      errorMount.innerHTML = renderErrorBanner(err.code, err.detail);
    } else {
      errorMount.innerHTML = renderErrorBanner("ClientError", String(err));
    }
  }

  function showSession(payload: SessionPayload): void {
    state.payload = payload;
    errorMount.innerHTML = "";
    // keep tab focus for groups that are still open, forget the rest
    const keep: ViewState = { activeTabs: {} };
    for (const group of payload.groups) {
      const chosen = state.view.activeTabs[group.id];
      keep.activeTabs[group.id] =
        chosen !== undefined && group.buckets[chosen].length > 0 ? chosen : defaultTab(group);
    }
    state.view = keep;
    sessionMount.innerHTML = renderSession(payload, state.view);
    root.location.hash = payload.id;
  }

  async function act(run: () => Promise<void>): Promise<void> {
    if (state.busy) return;
    state.busy = true;
    try {
      await run();
    } catch (err) {
      showError(err);
    } finally {
      state.busy = false;
    }
  }

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;

    if (action === "open-pattern") {
      const patternId = target.dataset.patternId!;
      const contextField = root.getElementById("context") as HTMLInputElement;
      const seedField = root.getElementById("seed") as HTMLInputElement;
      void act(async () => {
        const context = parseContext(contextField.value);
        const seed = Number(seedField.value) || 0;
        showSession(
          await client.openSession(patternId, context, seed, state.exampleCount),
        );
      });
    } else if (action === "select-tab") {
      // presentation-only: no server call
      state.view.activeTabs[target.dataset.groupId!] = target.dataset.tab as SyntaxType;
      if (state.payload) sessionMount.innerHTML = renderSession(state.payload, state.view);
    } else if (action === "pick-candidate") {
      const groupId = target.dataset.groupId!;
      const candidate = target.dataset.candidateId!;
      void act(async () => {
        showSession(
          await client.fill(state.payload!.id, groupId, { candidate }, state.exampleCount),
        );
      });
    } else if (action === "undo") {
      void act(async () => {
        showSession(await client.undo(state.payload!.id, state.exampleCount));
      });
    } else if (action === "show-example") {
      const exampleId = target.dataset.exampleId!;
      void act(async () => {
        detailMount.innerHTML = renderExampleDetail(await client.getExample(exampleId));
      });
    } else if (action === "close-example") {
      detailMount.innerHTML = "";
    } else if (action === "copy-code") {
      void act(async () => {
        const payload = await client.getCode(state.payload!.id);
        await root.defaultView!.navigator.clipboard.writeText(payload.code);
      });
    }
  });

  root.addEventListener("submit", (event) => {
    const form = (event.target as HTMLElement).closest<HTMLFormElement>(
      "form[data-action='fill-constant']",
    );
    if (!form) return;
    event.preventDefault();
    const groupId = form.dataset.groupId!;
    const input = form.elements.namedItem("constant") as HTMLInputElement;
    void act(async () => {
      showSession(
        await client.fill(
          state.payload!.id,
          groupId,
          { constant: input.value },
          state.exampleCount,
        ),
      );
    });
  });

  root.addEventListener("change", (event) => {
    const field = event.target as HTMLInputElement;
    if (field.id !== "example-count") return;
    const n = Math.min(Math.max(Number(field.value) || DEFAULT_EXAMPLES, 1), 100);
    state.exampleCount = n;
    if (!state.payload) return;
    void act(async () => {
      showSession(await client.getSession(state.payload!.id, n));
    });
  });

  void act(async () => {
    const { patterns } = await client.listPatterns();
    pickerMount.innerHTML = renderPatternPicker(patterns);
    const fromHash = root.location.hash.replace(/^#/, "");
    if (fromHash) {
      showSession(await client.getSession(fromHash, state.exampleCount));
    }
  });
}
