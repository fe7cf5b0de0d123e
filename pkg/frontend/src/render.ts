// Pure HTML-string renderers. Every function is a projection of the last
// server payload: candidate and example order is kept exactly as received,
// scores are printed from the payload values, and nothing is re-ranked or
// re-scored here. Interactive elements carry data-action attributes; the
// controller owns all event wiring.

import { escapeHtml } from "./html.js";
import type {
  Candidate,
  ExamplePayload,
  ExampleRef,
  Group,
  PatternSummary,
  SessionPayload,
  SyntaxType,
} from "./wire.js";
import { SYNTAX_TYPES } from "./wire.js";

export const TAB_LABELS: Record<SyntaxType, string> = {
  Enumeration: "Enumerations",
  MethodCall: "Method calls",
  Constant: "Constants",
  ClassInstantiation: "Class instantiations",
  DefinedVariable: "Defined variables",
};

/** Presentation state the server does not own: which tab each group shows. */
export interface ViewState {
  activeTabs: Record<string, SyntaxType>;
}

export function defaultTab(group: Group): SyntaxType {
  for (const tab of SYNTAX_TYPES) {
    if (group.buckets[tab].length > 0) return tab;
  }
  return "Constant";
}

export function renderPatternPicker(patterns: PatternSummary[]): string {
  const rows = patterns
    .map(
      (p) => `
    <li class="pattern-row">
      <button type="button" data-action="open-pattern" data-pattern-id="${escapeHtml(p.id)}">
        <span class="pattern-id">${escapeHtml(p.id)}</span>
        <span class="support-badge">support ${p.support}</span>
        <span class="hole-badge">${p.hole_count} holes</span>
      </button>
      <div class="pattern-desc">${escapeHtml(p.description)}</div>
      <pre class="pattern-text">${escapeHtml(p.text)}</pre>
    </li>`,
    )
    .join("\n");
  return `<ol class="pattern-list">${rows}\n</ol>`;
}

function popularityBar(value: number): string {
  const width = Math.round(Math.min(Math.max(value, 0), 1) * 100);
  return `<span class="pop-bar"><span class="pop-fill" style="width: ${width}%"></span></span>`;
}

function renderCandidate(groupId: string, cand: Candidate): string {
  const incomplete = cand.placeholders > 0;
  const classes = incomplete ? "candidate incomplete" : "candidate";
  const note = incomplete
    ? `<span class="incomplete-note">${cand.placeholders} placeholder${cand.placeholders === 1 ? "" : "s"} to fill</span>`
    : "";
  return `
      <li class="${classes}">
        <button type="button" data-action="pick-candidate"
                data-group-id="${escapeHtml(groupId)}"
                data-candidate-id="${escapeHtml(cand.id)}"${incomplete ? " disabled" : ""}>
          <code>${escapeHtml(cand.text)}</code>
        </button>
        ${popularityBar(cand.popularity)}
        <span class="pop-value">${String(cand.popularity)}</span>
        ${note}
      </li>`;
}

function renderConstantForm(group: Group): string {
  return `
    <form class="constant-form" data-action="fill-constant" data-group-id="${escapeHtml(group.id)}">
      <input name="constant" type="text" spellcheck="false"
             placeholder="${escapeHtml(group.declared_type)} literal, e.g. 42 or &quot;title&quot;" />
      <button type="submit">Use constant</button>
      <span class="form-hint">checked by the server against ${escapeHtml(group.declared_type)}</span>
    </form>`;
}

export function renderGroupPanel(group: Group, active: SyntaxType): string {
  const badge = `<span class="type-badge">${escapeHtml(group.declared_type)}</span>`;
  const holes = `<span class="hole-note">${group.holes.length} hole${group.holes.length === 1 ? "" : "s"}</span>`;
  const head = `
    <header class="group-head">
      <h3>${escapeHtml(group.description)}</h3>
      ${badge} ${holes}
    </header>`;

  if (group.assigned !== null) {
    return `
  <section class="group locked" data-group="${escapeHtml(group.id)}">
    ${head}
    <div class="assigned">
      <code>${escapeHtml(group.assigned)}</code>
      <button type="button" data-action="undo" title="revert the most recent fill">Undo</button>
    </div>
  </section>`;
  }

  const tabs = SYNTAX_TYPES.map((tab) => {
    const count = group.buckets[tab].length;
    const classes = tab === active ? "tab active" : "tab";
    return `<button type="button" class="${classes}" data-action="select-tab"
              data-group-id="${escapeHtml(group.id)}" data-tab="${tab}">
        ${TAB_LABELS[tab]} <span class="count">${count}</span>
      </button>`;
  }).join("\n      ");

  const items = group.buckets[active].map((c) => renderCandidate(group.id, c)).join("\n");
  const constants = active === "Constant" ? renderConstantForm(group) : "";
  const enumNote =
    active === "Enumeration" && group.enum_constants !== null
      ? `<div class="enum-note">${group.enum_constants.length} declared constants</div>`
      : "";

  return `
  <section class="group" data-group="${escapeHtml(group.id)}">
    ${head}
    <nav class="tabs">
      ${tabs}
    </nav>
    ${enumNote}
    <ul class="candidates">${items}
    </ul>
    ${constants}
  </section>`;
}

export function renderFixedPanel(fixed: Record<string, string>): string {
  const entries = Object.entries(fixed);
  if (entries.length === 0) return "";
  const rows = entries
    .map(
      ([hole, text]) =>
        `<li><span class="hole-id">${escapeHtml(hole)}</span> <code>${escapeHtml(text)}</code></li>`,
    )
    .join("\n");
  return `
  <section class="fixed-panel">
    <h3>Pre-filled by corpus consensus</h3>
    <ul>${rows}</ul>
  </section>`;
}

function matchBadges(example: ExampleRef, groups: Group[]): string {
  return groups
    .filter((g) => example.matches[g.id] !== undefined)
    .map((g) => {
      const badge = example.matches[g.id];
      return `<span class="badge badge-${badge}" title="${escapeHtml(g.description)}">${badge}</span>`;
    })
    .join(" ");
}

export function renderExampleFeed(payload: SessionPayload): string {
  const rows = payload.examples
    .map((ex) => {
      const pinned = ex.rank === 1 ? " pinned" : "";
      return `
    <li class="example-row${pinned}" data-example-id="${escapeHtml(ex.id)}">
      <span class="rank">#${ex.rank}</span>
      <button type="button" data-action="show-example" data-example-id="${escapeHtml(ex.id)}">
        ${escapeHtml(ex.id)}
      </button>
      <span class="score">${String(ex.score)}</span>
      ${matchBadges(ex, payload.groups)}
    </li>`;
    })
    .join("\n");
  return `
  <section class="feed">
    <header class="feed-head">
      <h3>Recommended examples</h3>
      <span class="feed-count">showing ${payload.examples.length} of ${payload.example_total}</span>
    </header>
    <ol class="example-list">${rows}
    </ol>
  </section>`;
}

export function renderCodePanel(code: string | null): string {
  if (code === null) {
    return `<section class="code-panel empty"><p>Fill every group to emit code.</p></section>`;
  }
  return `
  <section class="code-panel">
    <header class="code-head">
      <h3>Emitted snippet</h3>
      <button type="button" data-action="copy-code">Copy</button>
    </header>
    <pre id="emitted-code"><code>${escapeHtml(code)}</code></pre>
  </section>`;
}

export function renderExampleDetail(example: ExamplePayload): string {
  const params = example.context_params
    .map(([name, type]) => `${escapeHtml(name)}: ${escapeHtml(type)}`)
    .join(", ");
  return `
  <aside class="example-detail">
    <header>
      <h3>${escapeHtml(example.id)}</h3>
      <span class="params">(${params})</span>
      <button type="button" data-action="close-example">Close</button>
    </header>
    <pre><code>${escapeHtml(example.text)}</code></pre>
  </aside>`;
}

export function renderErrorBanner(code: string, detail: string): string {
  return `<div class="error-banner" role="alert"><strong>${escapeHtml(code)}</strong> ${escapeHtml(detail)}</div>`;
}

export function renderSession(payload: SessionPayload, view: ViewState): string {
  const groups = payload.groups
    .map((g) => renderGroupPanel(g, view.activeTabs[g.id] ?? defaultTab(g)))
    .join("\n");
  const status = payload.complete
    ? `<span class="status complete">complete</span>`
    : `<span class="status">in progress</span>`;
  return `
  <header class="session-head">
    <h2>Session <code>${escapeHtml(payload.id)}</code></h2>
    <span class="pattern-ref">${escapeHtml(payload.pattern_id)}</span>
    ${status}
  </header>
  ${renderFixedPanel(payload.fixed)}
  <div class="columns">
    <div class="column groups">${groups}</div>
    <div class="column side">
      ${renderExampleFeed(payload)}
      ${renderCodePanel(payload.code)}
    </div>
  </div>`;
}
