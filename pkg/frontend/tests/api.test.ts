import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function recordingClient(status: number, body: unknown) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fakeFetch = (async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), { status });
  }) as typeof fetch;
  return { client: new ApiClient("http://x", fakeFetch), calls };
}

describe("ApiClient", () => {
  it("builds endpoint URLs and JSON bodies", async () => {
    const { client, calls } = recordingClient(200, { id: "abc" });
    await client.addCorrection("abc", { position: 3, kind: "combine", delta: 7 });
    expect(calls[0].url).toBe("http://x/api/v1/recovery/sessions/abc/corrections");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      position: 3,
      kind: "combine",
      delta: 7,
    });
  });

  it("encodes tabula header params", async () => {
    const { client, calls } = recordingClient(200, {});
    await client.tabula({ top: "key:WONDERFUL", left: undefined });
    expect(calls[0].url).toBe("http://x/api/v1/tabula?top=key%3AWONDERFUL");
  });

  it("maps error bodies onto ApiError", async () => {
    const { client } = recordingClient(400, { code: "range", message: "offset too big" });
    await expect(client.getSession("zzz")).rejects.toThrowError(ApiError);
    await expect(client.getSession("zzz")).rejects.toMatchObject({
      code: "range",
      message: "offset too big",
      status: 400,
    });
  });
});
