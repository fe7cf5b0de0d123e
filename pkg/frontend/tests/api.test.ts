// Replays recorded/traffic.json through the ApiClient: every request the
// client issues must match the recorded one (method, path incl. query,
// body), and the conversation must consume the recording exactly — no
// extra calls, none of the documented calls skipped.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";
import type { SessionPayload } from "../src/wire.js";

interface Recorded {
  pattern: string;
  session: string;
  exchanges: {
    name: string;
    request: { method: string; path: string; body: unknown | null };
    response: { status: number; body: unknown };
  }[];
}

const traffic: Recorded = JSON.parse(
  readFileSync(new URL("./recorded/traffic.json", import.meta.url), "utf-8"),
);

const DOCUMENTED = new Set([
  "GET /patterns",
  "GET /examples/{id}",
  "POST /sessions",
  "GET /sessions/{id}",
  "POST /sessions/{id}/fill",
  "POST /sessions/{id}/undo",
  "GET /sessions/{id}/code",
]);

function shape(method: string, path: string): string {
  const bare = path.split("?")[0]!;
  const normalized = bare
    .replace(/^\/sessions\/[^/]+/, "/sessions/{id}")
    .replace(/^\/examples\/[^/]+/, "/examples/{id}");
  return `${method} ${normalized}`;
}

class ReplayFetch {
  cursor = 0;
  constructor(private readonly recorded: Recorded) {}

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const exchange = this.recorded.exchanges[this.cursor];
    expect(exchange, `client issued an extra request: ${url}`).toBeDefined();
    this.cursor += 1;
    expect(init?.method ?? "GET").toBe(exchange!.request.method);
    expect(url).toBe(exchange!.request.path);
    const sent = init?.body === undefined ? null : JSON.parse(init.body as string);
    expect(sent).toEqual(exchange!.request.body);
    return new Response(JSON.stringify(exchange!.response.body), {
      status: exchange!.response.status,
      headers: { "content-type": "application/json" },
    });
  };
}

describe("recorded traffic replay", () => {
  it("the full session conversation matches the recording, call for call", async () => {
    const replay = new ReplayFetch(traffic);
    const client = new ApiClient("", replay.fetch);
    const sid = traffic.session;

    const patterns = await client.listPatterns();
    expect(patterns.patterns.map((p) => p.id)).toContain(traffic.pattern);

    const opened = await client.openSession(
      traffic.pattern,
      [
        ["wb", "Workbook"],
        ["cell", "Cell"],
      ],
      7,
      10,
    );
    expect(opened.id).toBe(sid);
    expect(opened.complete).toBe(false);

    const reloaded = await client.getSession(sid, 10);
    expect(reloaded).toEqual(opened); // stateless reload: same payload

    await client.fill(sid, "group-0", { candidate: "wb" }, 10);
    await client.fill(sid, "group-1", { candidate: "wb.createCellStyle()" }, 10);
    const constantFill = await client.fill(sid, "group-2", { constant: "42" }, 10);
    expect(
      constantFill.groups.find((g) => g.id === "group-2")!.assigned,
    ).toBe("42");

    const undone = await client.undo(sid, 10);
    expect(undone.groups.find((g) => g.id === "group-2")!.assigned).toBeNull();

    await client.fill(sid, "group-2", { candidate: "IndexedColors.RED.getIndex()" }, 10);
    await client.fill(
      sid,
      "group-3",
      { candidate: "FillPatternType.SOLID_FOREGROUND" },
      10,
    );
    const full: SessionPayload = await client.fill(sid, "group-4", { candidate: "cell" }, 10);
    expect(full.complete).toBe(true);
    expect(full.code).not.toBeNull();

    const code = await client.getCode(sid);
    expect(code.complete).toBe(true);
    expect(code.code).toBe(full.code);

    const example = await client.getExample("ex-05");
    expect(example.id).toBe("ex-05");

    const shrunk = await client.getSession(sid, 3);
    expect(shrunk.examples).toHaveLength(3);
    expect(shrunk.example_total).toBe(full.example_total);

    await expect(
      client.fill(sid, "group-0", { candidate: "wb" }, 10),
    ).rejects.toMatchObject({ status: 409, code: "GroupAlreadyFilled" });
    await expect(client.getExample("ex-99")).rejects.toBeInstanceOf(ServiceError);

    expect(replay.cursor).toBe(traffic.exchanges.length); // nothing skipped
  });

  it("every recorded request is a documented endpoint", () => {
    for (const exchange of traffic.exchanges) {
      expect(DOCUMENTED).toContain(shape(exchange.request.method, exchange.request.path));
    }
  });

  it("errors carry the service's error code and detail", async () => {
    const conflict = traffic.exchanges.find((e) => e.name === "refill-conflict")!;
    const client = new ApiClient("", async () =>
      new Response(JSON.stringify(conflict.response.body), { status: 409 }),
    );
    const failure = await client.fill("s", "group-0", { candidate: "wb" }).catch((e) => e);
    expect(failure).toBeInstanceOf(ServiceError);
    expect(failure.code).toBe("GroupAlreadyFilled");
    expect(failure.detail.length).toBeGreaterThan(0);
  });
});
