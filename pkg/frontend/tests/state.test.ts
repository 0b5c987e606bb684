import { describe, expect, it } from "vitest";

import { ApiClient, Correction, SessionView } from "../src/api.js";
import { WorkbenchSession } from "../src/state.js";

/** A fake server: tracks corrections per session and derives a
 * deterministic "plaintext" so tests can watch views change. */
class FakeServer {
  corrections: Correction[] = [];
  calls: string[] = [];

  view(): SessionView {
    const base = "GARBLEDMESSAGETEXT";
    const derived = this.corrections.length ? "READABLEMESSAGETXT" : base;
    return {
      id: "s1",
      scheme: "fibonarng",
      ciphertext: "XXXXXXXXXXXXXXXXXX",
      masked_seed_len: null,
      derived,
      fitness: derived.split("").map((_, i) => (i > 8 && !this.corrections.length ? -8 : -3)),
      corrections: [...this.corrections],
      suspect: this.corrections.length ? null : 9,
      key_digest: "d".repeat(64),
      created: "2026-01-01T00:00:00+00:00",
    };
  }

  client(): ApiClient {
    const server = this;
    const fakeFetch = (async (url: string, init?: RequestInit) => {
      const method = init?.method ?? "GET";
      server.calls.push(`${method} ${url}`);
      let body: unknown = server.view();
      if (method === "POST" && url.endsWith("/corrections")) {
        server.corrections.push(JSON.parse(String(init!.body)) as Correction);
        body = server.view();
      } else if (method === "DELETE" && url.includes("/corrections/")) {
        const position = Number(url.split("/").pop());
        server.corrections = server.corrections.filter((c) => c.position !== position);
        body = server.view();
      } else if (url.endsWith("/save")) {
        body = {
          version: 1,
          scheme: "fibonarng",
          ciphertext: "XXXXXXXXXXXXXXXXXX",
          key_digest: "d".repeat(64),
          corrections: [...server.corrections],
          created: "2026-01-01T00:00:00+00:00",
          updated: "2026-01-01T00:00:01+00:00",
        };
      } else if (method === "POST" && url.endsWith("/sessions")) {
        body = server.view();
      }
      return new Response(JSON.stringify(body), { status: 200 });
    }) as typeof fetch;
    return new ApiClient("", fakeFetch);
  }
}

const CORRECTION: Correction = { position: 9, kind: "keystream", delta: 4 };

describe("WorkbenchSession", () => {
  it("renders only server responses", async () => {
    const server = new FakeServer();
    const session = await WorkbenchSession.create(server.client(), {
      scheme: "fibonarng",
      ciphertext: "XXXXXXXXXXXXXXXXXX",
      keyfile: "/keys",
    });
    expect(session.view.derived).toBe("GARBLEDMESSAGETEXT");
    const after = await session.apply(CORRECTION);
    expect(after.derived).toBe("READABLEMESSAGETXT");
    expect(after.corrections).toEqual([CORRECTION]);
  });

  it("undo of apply issues the inverse call and restores the view", async () => {
    const server = new FakeServer();
    const session = await WorkbenchSession.create(server.client(), {
      scheme: "fibonarng",
      ciphertext: "XXXXXXXXXXXXXXXXXX",
      keyfile: "/keys",
    });
    const before = session.view.derived;
    await session.apply(CORRECTION);
    expect(session.canUndo).toBe(true);
    const restored = await session.undo();
    expect(restored.derived).toBe(before);
    expect(server.calls.some((c) => c.startsWith("DELETE"))).toBe(true);
    expect(session.canUndo).toBe(false);
  });

  it("undo of remove re-applies the correction", async () => {
    const server = new FakeServer();
    const session = await WorkbenchSession.create(server.client(), {
      scheme: "fibonarng",
      ciphertext: "XXXXXXXXXXXXXXXXXX",
      keyfile: "/keys",
    });
    await session.apply(CORRECTION);
    await session.remove(9);
    expect(session.view.corrections).toEqual([]);
    await session.undo();
    expect(session.view.corrections).toEqual([CORRECTION]);
  });

  it("reload rebuilds an identical view from a saved document", async () => {
    const server = new FakeServer();
    const client = server.client();
    const session = await WorkbenchSession.create(client, {
      scheme: "fibonarng",
      ciphertext: "XXXXXXXXXXXXXXXXXX",
      keyfile: "/keys",
    });
    await session.apply(CORRECTION);
    const doc = await session.save();
    const fresh = new FakeServer();
    const reloaded = await WorkbenchSession.reload(fresh.client(), doc, {
      keyfile: "/keys",
    });
    expect(reloaded.view.derived).toBe(session.view.derived);
    expect(reloaded.view.corrections).toEqual(session.view.corrections);
  });
});
